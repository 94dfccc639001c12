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

// Independent reference implementations for the unit tests. Everything here
// works on dense vectors and the full Y x M product, and shares no code with
// the library beyond its public accessors.

#ifndef ZEITGEIST_TESTS_ORACLE_HPP_
#define ZEITGEIST_TESTS_ORACLE_HPP_

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "zeitgeist/ez_solver.hpp"

namespace oracle {

using zeitgeist::Group;
using zeitgeist::Index;
using zeitgeist::Model;
using zeitgeist::StageEnv;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double kl(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInf;
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

inline std::vector<double> outer(const std::vector<double>& y, const std::vector<double>& m) {
  std::vector<double> out;
  out.reserve(y.size() * m.size());
  for (double a : y)
    for (double b : m) out.push_back(a * b);
  return out;
}

inline double payoff(const StageEnv& env, const zeitgeist::Kernel& k, Index own, Index opp) {
  const std::vector<double> row = k.dense_row(own, opp);
  double s = 0.0;
  for (Index y = 0; y < row.size(); ++y) s += row[y] * env.utility()[y];
  return s;
}

// KL on the full product Y x M.
inline double match_kl(const StageEnv& env, const zeitgeist::Kernel& k, Index s, Index own, Index opp,
                       Index conj) {
  const auto& mon = env.monitoring().dist;
  return oracle::kl(outer(env.kernel(s).dense_row(own, opp), mon[opp]), outer(k.dense_row(own, conj), mon[conj]));
}

inline double weighted(double w, double v) { return v == kInf ? kInf : w * v; }

inline double weighted_kl(const StageEnv& env, const Model& m, Index param, Group g, zeitgeist::Shares sh,
                          Index s, const zeitgeist::Quadruple& q) {
  const zeitgeist::Parameter p = m.parameter(param);
  const Group o = zeitgeist::other(g);
  const zeitgeist::Kernel& k = m.kernel(p.kernel);
  const double own = oracle::match_kl(env, k, s, q.play(g, g), q.play(g, g), p.conj(g));
  const double cross = oracle::match_kl(env, k, s, q.play(g, o), q.play(o, g), p.conj(o));
  const double pg = sh.of(g);
  const double a = weighted(pg, own), b = weighted(1.0 - pg, cross);
  return a == kInf || b == kInf ? kInf : a + b;
}

inline std::vector<Index> minimizers(const StageEnv& env, const Model& m, Group g, zeitgeist::Shares sh, Index s,
                                     const zeitgeist::Quadruple& q) {
  std::vector<double> v(m.size());
  double lo = kInf;
  for (Index i = 0; i < m.size(); ++i) {
    v[i] = oracle::weighted_kl(env, m, i, g, sh, s, q);
    lo = std::min(lo, v[i]);
  }
  std::vector<Index> out;
  for (Index i = 0; i < m.size(); ++i)
    if (lo == kInf || v[i] <= lo + 1e-9 * std::max(1.0, std::abs(lo))) out.push_back(i);
  return out;
}

// Subjective payoff of `own` against a group-`opp` opponent under one parameter.
inline double subjective(const StageEnv& env, const Model& m, Index param, Group opp, Index own) {
  const zeitgeist::Parameter p = m.parameter(param);
  return oracle::payoff(env, m.kernel(p.kernel), own, p.conj(opp));
}

inline bool best_under(const StageEnv& env, const Model& m, Index param, Group opp, Index played) {
  const double v = subjective(env, m, param, opp, played);
  for (Index a = 0; a < env.num_strategies(); ++a)
    if (oracle::subjective(env, m, param, opp, a) > v + 1e-9) return false;
  return true;
}

// Quadruples in situation s supported by single-parameter beliefs for both groups.
inline std::set<std::array<Index, 4>> pure_belief_ez(const StageEnv& env, const Model& ma, const Model& mb,
                                                     zeitgeist::Shares sh, Index s) {
  std::set<std::array<Index, 4>> out;
  const Index n = env.num_strategies();
  for (Index aa = 0; aa < n; ++aa)
    for (Index ab = 0; ab < n; ++ab)
      for (Index ba = 0; ba < n; ++ba)
        for (Index bb = 0; bb < n; ++bb) {
          const zeitgeist::Quadruple q{aa, ab, ba, bb};
          bool ok = true;
          for (Group g : {Group::A, Group::B}) {
            const Model& m = g == Group::A ? ma : mb;
            bool any = false;
            for (Index k : oracle::minimizers(env, m, g, sh, s, q)) {
              if (oracle::best_under(env, m, k, Group::A, q.play(g, Group::A)) &&
                  best_under(env, m, k, Group::B, q.play(g, Group::B))) {
                any = true;
                break;
              }
            }
            ok = ok && any;
          }
          if (ok) out.insert({aa, ab, ba, bb});
        }
  return out;
}

inline std::vector<double> random_row(std::mt19937_64& rng, Index n, double zero_prob) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> r(n);
  double s = 0.0;
  for (double& x : r) {
    x = u(rng) < zero_prob ? 0.0 : u(rng) + 1e-3;
    s += x;
  }
  if (s == 0.0) {
    r[std::uniform_int_distribution<Index>(0, n - 1)(rng)] = 1.0;
    return r;
  }
  for (double& x : r) x /= s;
  return r;
}

inline zeitgeist::KernelPtr random_kernel(std::mt19937_64& rng, Index n_a, Index n_y, double zero_prob) {
  std::vector<std::vector<std::vector<double>>> rows(n_a);
  for (auto& r : rows)
    for (Index j = 0; j < n_a; ++j) r.push_back(random_row(rng, n_y, zero_prob));
  return std::make_shared<zeitgeist::TableKernel>(n_a, n_y, rows);
}

struct RandomFixture {
  std::shared_ptr<StageEnv> env;
  std::shared_ptr<Model> a, b;
};

// Small random environment with perfect or noisy monitoring and two models
// mixing true and random kernels.
inline RandomFixture random_fixture(std::mt19937_64& rng, Index n_a, Index n_y, Index n_s, bool noisy) {
  std::vector<std::string> strategies, ys, sits;
  for (Index i = 0; i < n_a; ++i) strategies.push_back("s" + std::to_string(i));
  for (Index i = 0; i < n_y; ++i) ys.push_back("y" + std::to_string(i));
  for (Index i = 0; i < n_s; ++i) sits.push_back("G" + std::to_string(i));
  std::vector<zeitgeist::KernelPtr> ks;
  for (Index i = 0; i < n_s; ++i) ks.push_back(random_kernel(rng, n_a, n_y, 0.2));
  std::vector<double> util(n_y);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& x : util) x = u(rng);
  auto mon = noisy ? zeitgeist::Monitoring::noisy(strategies, 0.8) : zeitgeist::Monitoring::perfect(strategies);
  RandomFixture f;
  f.env = std::make_shared<StageEnv>(strategies, ys, sits, ks, util, mon);
  std::vector<zeitgeist::KernelPtr> ka{ks[0], random_kernel(rng, n_a, n_y, 0.3)};
  std::vector<zeitgeist::KernelPtr> kb{random_kernel(rng, n_a, n_y, 0.0), random_kernel(rng, n_a, n_y, 0.3)};
  if (n_s > 1) kb.push_back(ks[1]);
  f.a = std::make_shared<Model>(Model::strategic_certainty("ra", ka, n_a));
  // Explicit parameter list for the second model.
  std::vector<zeitgeist::Parameter> ps;
  std::uniform_int_distribution<Index> pick(0, n_a - 1);
  for (Index k = 0; k < kb.size(); ++k)
    for (int t = 0; t < 4; ++t) ps.push_back({pick(rng), pick(rng), k});
  f.b = std::make_shared<Model>(Model::with_parameters("rb", kb, ps, n_a));
  return f;
}

}  // namespace oracle

#endif  // ZEITGEIST_TESTS_ORACLE_HPP_
