// Copyright 2026 The Zeitgeist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zeitgeist/games_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <sstream>

namespace zeitgeist {
namespace {

long long key9(double x) { return std::llround(x * 1e9); }

// Y = (own strategy) x (price bin); consequence labels "a<own>:p<bin>".
std::vector<std::string> blocked_labels(Index n_strategies, Index bins) {
  std::vector<std::string> out;
  out.reserve(n_strategies * bins);
  for (Index a = 0; a < n_strategies; ++a)
    for (Index j = 0; j < bins; ++j) out.push_back("a" + std::to_string(a) + ":p" + std::to_string(j));
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

// ---- Cournot -------------------------------------------------------------

void CournotSpec::validate() const {
  if (!(beta > c)) throw InputError("cournot: beta must exceed c");
  if (!(r > 0.0)) throw InputError("cournot: r must be positive");
  if (!(r_hat > 0.0)) throw InputError("cournot: r_hat must be positive");
}

double cournot_entrant_fitness(const CournotSpec& spec, double r_hat) {
  const double a_ba = (spec.beta - spec.c) / (2.0 * r_hat + spec.r);
  return 0.5 * (a_ba * (spec.beta - spec.c) - a_ba * a_ba * spec.r);
}

CournotReport cournot_closed_form(const CournotSpec& spec) {
  spec.validate();
  const double d = spec.beta - spec.c;
  CournotReport rep;
  rep.a_aa = d / (3.0 * spec.r);
  rep.resident_fitness = d * d / (9.0 * spec.r);
  rep.a_stack = d / (2.0 * spec.r);
  rep.a_ba = d / (2.0 * spec.r_hat + spec.r);
  rep.entrant_fitness = cournot_entrant_fitness(spec, spec.r_hat);
  return rep;
}

std::vector<double> uniform_grid(double lo, double hi, Index n) {
  if (n < 2 || !(hi > lo)) throw InputError("uniform_grid needs n >= 2 and hi > lo");
  std::vector<double> g(n);
  for (Index i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

CournotDiscrete build_cournot_discrete(const CournotSpec& spec, const std::vector<double>& grid,
                                       Index price_bins, double noise_sd) {
  spec.validate();
  if (grid.size() < 2) throw InputError("cournot: quantity grid needs at least 2 points");
  for (Index i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InputError("cournot: quantity grid must be strictly increasing");
  const double q_max = (spec.beta - spec.c) / spec.r;
  if (grid.front() > 1e-12 || grid.back() < q_max - 1e-12)
    throw InputError("cournot: quantity grid must cover [0, (beta - c) / r]");
  if (!(noise_sd >= 0.0)) throw InputError("cournot: noise_sd must be nonnegative");

  const Index n = grid.size();
  auto classes = ProfileClasses::by_level_sum(grid);

  // Intercepts that fit truthful data exactly: beta + (r_hat - r) S over
  // every attainable quantity sum S, plus beta itself, padded by two steps.
  double step = 0.0;
  for (Index i = 1; i < n; ++i) step = std::max(step, grid[i] - grid[i - 1]);
  const double lattice = std::abs(spec.r_hat - spec.r) > 0 ? std::abs(spec.r_hat - spec.r) * step
                                                           : spec.r * step;
  std::set<long long> keys;
  keys.insert(key9(spec.beta));
  double lo = spec.beta, hi = spec.beta;
  for (double s : classes->level_sums) {
    const double b = spec.beta + (spec.r_hat - spec.r) * s;
    keys.insert(key9(b));
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  for (int k = 1; k <= 2; ++k) {
    keys.insert(key9(lo - k * lattice));
    keys.insert(key9(hi + k * lattice));
  }
  std::vector<double> intercepts;
  for (long long k : keys) intercepts.push_back(static_cast<double>(k) * 1e-9);

  // Binning covers every mean any kernel can produce, +/- 4 sd.
  const double s_max = 2.0 * grid.back(), s_min = 2.0 * grid.front();
  double m_lo = std::min(spec.beta - spec.r * s_max, spec.beta - spec.r * s_min);
  double m_hi = std::max(spec.beta - spec.r * s_max, spec.beta - spec.r * s_min);
  for (double b : intercepts) {
    for (double slope : {spec.r, spec.r_hat}) {
      m_lo = std::min({m_lo, b - slope * s_max, b - slope * s_min});
      m_hi = std::max({m_hi, b - slope * s_max, b - slope * s_min});
    }
  }
  const double pad = 4.0 * std::max(noise_sd, 1e-9);
  Binning binning{m_lo - pad, m_hi + pad, std::max<Index>(price_bins, 2), noise_sd};
  auto bank = std::make_shared<NormalBank>(binning);

  auto make = [&](double intercept, double slope) -> KernelPtr {
    return std::make_shared<BinnedNormalKernel>(bank, classes, LinearPrice{grid, intercept, slope}, true);
  };
  KernelPtr truth = make(spec.beta, spec.r);
  std::vector<KernelPtr> ka, kb;
  for (double b : intercepts) {
    ka.push_back(make(b, spec.r));
    kb.push_back(make(b, spec.r_hat));
  }

  std::vector<double> utility(n * binning.bins);
  for (Index a = 0; a < n; ++a)
    for (Index j = 0; j < binning.bins; ++j) utility[a * binning.bins + j] = grid[a] * (binning.center(j) - spec.c);

  std::vector<std::string> strategies;
  for (double q : grid) strategies.push_back(fmt(q));

  CournotDiscrete out{
      StageEnv(strategies, blocked_labels(n, binning.bins), {"G"}, {truth}, std::move(utility),
               Monitoring::perfect(strategies)),
      Model::strategic_certainty("cournot-r", std::move(ka), n),
      Model::strategic_certainty("cournot-r_hat", std::move(kb), n), intercepts, 0.0, {}};

  // Entrant fixed point against residents, in closed form.
  const CournotReport rep = cournot_closed_form(spec);
  const double a_ab = (spec.beta - spec.c - spec.r * rep.a_ba) / (2.0 * spec.r);
  const double target = spec.beta + (spec.r_hat - spec.r) * (rep.a_ba + a_ab);
  double best = kInf;
  for (double b : intercepts) best = std::min(best, std::abs(b - target));
  out.intercept_residual = best;
  if (best > 0.5 * lattice)
    out.warnings.push_back("entrant intercept " + fmt(target) + " off the grid by " + fmt(best));
  return out;
}

// ---- Investment game -----------------------------------------------------

InvestmentConditions check_conditions(const InvestmentSpec& s) {
  InvestmentConditions c;
  c.condition1 = 5.0 * s.b < s.c && s.c < 6.0 * s.b;
  c.condition2 = s.c < 4.0 * s.b + s.m / 3.0 && s.c < 5.0 * s.b + s.m / 4.0;
  return c;
}

double investment_b_star(const InvestmentSpec& s, int a_i, int a_j) {
  return s.b + s.m / static_cast<double>(a_i + a_j);
}

InvestmentGame build_investment_game(const InvestmentSpec& spec, double noise_sd) {
  if (!(spec.b > 0.0)) throw InputError("investment: b must be positive");
  if (!(spec.m >= 0.0)) throw InputError("investment: m must be nonnegative");
  if (!(noise_sd > 0.0)) throw InputError("investment: noise_sd must be positive");

  std::set<long long> keys;
  for (int k = 0; k <= 14; ++k) keys.insert(key9(spec.b + k * spec.m / 24.0));
  for (int s : {2, 3, 4}) keys.insert(key9(spec.b + spec.m / s));
  std::vector<double> b_grid;
  for (long long k : keys) b_grid.push_back(static_cast<double>(k) * 1e-9);

  const std::vector<double> levels{1.0, 2.0};
  auto classes = ProfileClasses::by_level_sum(levels);
  double m_lo = 2.0 * spec.b, m_hi = 4.0 * spec.b;
  for (double b : b_grid) {
    m_lo = std::min({m_lo, 2.0 * b - spec.m, 4.0 * b - spec.m});
    m_hi = std::max({m_hi, 2.0 * b - spec.m, 4.0 * b - spec.m});
  }
  // Wide tails keep the bin-center payoffs exact to rounding.
  const double pad = 8.0 * noise_sd;
  const double width = 0.25 * noise_sd;
  const auto bins = static_cast<Index>(std::ceil((m_hi - m_lo + 2.0 * pad) / width));
  Binning binning{m_lo - pad, m_lo - pad + static_cast<double>(bins) * width, bins, noise_sd};
  auto bank = std::make_shared<NormalBank>(binning);

  KernelPtr truth = std::make_shared<BinnedNormalKernel>(bank, classes, LinearPrice{levels, 0.0, -spec.b}, true);
  std::vector<KernelPtr> kb;
  for (double b : b_grid)
    kb.push_back(std::make_shared<BinnedNormalKernel>(bank, classes, LinearPrice{levels, -spec.m, -b}, true));

  std::vector<double> utility(2 * bins);
  for (Index a = 0; a < 2; ++a)
    for (Index j = 0; j < bins; ++j)
      utility[a * bins + j] = levels[a] * binning.center(j) - (levels[a] - 1.0) * spec.c;

  const std::vector<std::string> strategies{"1", "2"};
  StageEnv env(strategies, blocked_labels(2, bins), {"G"}, {truth}, std::move(utility),
               Monitoring::perfect(strategies));
  Model model_a = singleton_model(env, truth, "correct");
  InvestmentGame out{std::move(env), std::move(model_a),
                     Model::strategic_certainty("offset", std::move(kb), 2), b_grid,
                     investment_b_star(spec, 1, 1), investment_b_star(spec, 1, 2),
                     investment_b_star(spec, 2, 2), check_conditions(spec)};
  return out;
}

// ---- Three-strategy, two-situation example -------------------------------

StageEnv build_example1() {
  // Success probability of the row player, [situation][own][opp].
  static constexpr double kP[2][3][3] = {
      {{0.1, 0.1, 0.1}, {0.1, 0.3, 0.1}, {0.11, 0.1, 0.2}},
      {{0.11, 0.5, 0.12}, {0.5, 0.12, 0.14}, {0.4, 0.55, 0.4}},
  };
  std::vector<KernelPtr> kernels;
  for (const auto& table : kP) {
    std::vector<std::vector<std::vector<double>>> rows(3, std::vector<std::vector<double>>(3));
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j) rows[i][j] = {table[i][j], 1.0 - table[i][j]};
    kernels.push_back(std::make_shared<TableKernel>(3, 2, rows));
  }
  const std::vector<std::string> strategies{"a1", "a2", "a3"};
  return StageEnv(strategies, {"g", "b"}, {"G_A", "G_B"}, std::move(kernels), {1.0, 0.0},
                  Monitoring::perfect(strategies));
}

}  // namespace zeitgeist
