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

// Centipede and dollar games with role symmetrization. Strategies are drop
// plans over nodes 1..K; P1 moves at odd nodes, P2 at even ones.

#include <cmath>

#include "zeitgeist/games_catalog.hpp"

namespace zeitgeist {
namespace {

bool p1_moves(Index k) { return k % 2 == 1; }

void check_plan(const TakeoverGame& game, const DropPlan& plan) {
  if (plan.size() != game.K + 1) throw InputError("drop plan must have K + 1 entries");
}

// KL(data || model) over terminal nodes; data and model from outcome_distribution.
double outcome_kl(const std::vector<double>& data, const std::vector<double>& model) {
  double kl = 0.0;
  for (Index z = 1; z < data.size(); ++z) {
    if (data[z] <= 0.0) continue;
    if (model[z] <= 0.0) return kInf;
    kl += data[z] * std::log(data[z] / model[z]);
  }
  return kl;
}

// Conjecture about one opponent group: x on its even nodes, y on its odd ones.
DropPlan conjecture(Index K, double x, double y) {
  DropPlan p(K + 1, 0.0);
  for (Index k = 1; k <= K; ++k) p[k] = p1_moves(k) ? y : x;
  return p;
}

double subjective_best(const TakeoverGame& game, const DropPlan& conj) {
  return 0.5 * best_role_value(game, conj, 0) + 0.5 * best_role_value(game, conj, 1);
}

void add_check(std::vector<EzCheck>& out, std::string name, double value, double expected, double tol) {
  out.push_back({std::move(name), std::abs(value - expected) <= tol, value, expected});
}

// Best-response and conjecture checks shared by the centipede and dollar games.
void verify_maximal_continuation(const TakeoverGame& game, std::vector<EzCheck>& checks) {
  const Index K = game.K;
  const MaximalContinuation mc = maximal_continuation(K);
  const double two_k = 2.0 / static_cast<double>(K);
  constexpr double kStep = 1e-6;

  const double x_a = analogy_conjecture(game, mc.analogy, mc.correct_vs_analogy, 0, kStep);
  const double y_a = analogy_conjecture(game, mc.analogy, mc.correct_vs_analogy, 1, kStep);
  const double x_b = analogy_conjecture(game, mc.analogy, mc.analogy, 0, kStep);
  const double y_b = analogy_conjecture(game, mc.analogy, mc.analogy, 1, kStep);
  add_check(checks, "analogy conjecture x vs correct", x_a, two_k, kStep);
  add_check(checks, "analogy conjecture y vs correct", y_a, two_k, kStep);
  add_check(checks, "analogy conjecture x vs analogy", x_b, two_k, kStep);
  add_check(checks, "analogy conjecture y vs analogy", y_b, 0.0, kStep);

  // Subjective optimality under the exact conjectures.
  const DropPlan conj_a = conjecture(K, two_k, two_k);
  const DropPlan conj_b = conjecture(K, two_k, 0.0);
  add_check(checks, "analogy optimal vs correct",
            symmetrized_payoff(game, mc.analogy, conj_a), subjective_best(game, conj_a), kTieTol);
  add_check(checks, "analogy optimal vs analogy",
            symmetrized_payoff(game, mc.analogy, conj_b), subjective_best(game, conj_b), kTieTol);

  // Correct agents best respond to actual play.
  add_check(checks, "correct optimal vs correct",
            symmetrized_payoff(game, mc.correct_vs_correct, mc.correct_vs_correct),
            subjective_best(game, mc.correct_vs_correct), kTieTol);
  add_check(checks, "correct optimal vs analogy",
            symmetrized_payoff(game, mc.correct_vs_analogy, mc.analogy),
            subjective_best(game, mc.analogy), kTieTol);
}

double tree_fitness(const TakeoverGame& game, double p, bool correct) {
  const MaximalContinuation mc = maximal_continuation(game.K);
  if (correct)
    return p * symmetrized_payoff(game, mc.correct_vs_correct, mc.correct_vs_correct) +
           (1.0 - p) * symmetrized_payoff(game, mc.correct_vs_analogy, mc.analogy);
  return p * symmetrized_payoff(game, mc.analogy, mc.correct_vs_analogy) +
         (1.0 - p) * symmetrized_payoff(game, mc.analogy, mc.analogy);
}

bool all_pass(const std::vector<EzCheck>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace

std::vector<double> outcome_distribution(const TakeoverGame& game, const DropPlan& p1, const DropPlan& p2) {
  check_plan(game, p1);
  check_plan(game, p2);
  std::vector<double> out(game.K + 2, 0.0);
  double reach = 1.0;
  for (Index k = 1; k <= game.K; ++k) {
    const double d = p1_moves(k) ? p1[k] : p2[k];
    out[k] = reach * d;
    reach *= 1.0 - d;
  }
  out[game.K + 1] = reach;
  return out;
}

double role_payoff(const TakeoverGame& game, const DropPlan& p1, const DropPlan& p2, int role) {
  const std::vector<double> z = outcome_distribution(game, p1, p2);
  double v = z[game.K + 1] * game.end_payoff[role];
  for (Index k = 1; k <= game.K; ++k) v += z[k] * game.drop_payoff[k][role];
  return v;
}

double symmetrized_payoff(const TakeoverGame& game, const DropPlan& me, const DropPlan& opp) {
  return 0.5 * role_payoff(game, me, opp, 0) + 0.5 * role_payoff(game, opp, me, 1);
}

double best_role_value(const TakeoverGame& game, const DropPlan& opp, int role) {
  check_plan(game, opp);
  double v = game.end_payoff[role];
  for (Index k = game.K; k >= 1; --k) {
    const double drop = game.drop_payoff[k][role];
    if (p1_moves(k) == (role == 0))
      v = std::max(drop, v);
    else
      v = opp[k] * drop + (1.0 - opp[k]) * v;
  }
  return v;
}

void CentipedeSpec::validate() const {
  if (K < 4 || K % 2 != 0) throw InputError("centipede: K must be even and at least 4");
  if (!(g > 0.0)) throw InputError("centipede: g must be positive");
  if (!(l > 0.0)) throw InputError("centipede: l must be positive");
}

bool CentipedeSpec::continuation_condition() const {
  return g > 2.0 * l / static_cast<double>(K - 2);
}

TakeoverGame centipede_game(const CentipedeSpec& spec) {
  spec.validate();
  TakeoverGame game;
  game.K = spec.K;
  game.drop_payoff.assign(spec.K + 1, {0.0, 0.0});
  for (Index k = 1; k <= spec.K; ++k) {
    const double kd = static_cast<double>(k);
    if (k % 2 == 1) {
      const double v = spec.g * (kd - 1.0) / 2.0;
      game.drop_payoff[k] = {v, v};
    } else {
      game.drop_payoff[k] = {(kd - 2.0) * spec.g / 2.0 - spec.l, kd * spec.g / 2.0 + spec.l};
    }
  }
  const double end = static_cast<double>(spec.K) * spec.g / 2.0;
  game.end_payoff = {end, end};
  return game;
}

TakeoverGame dollar_game(Index K) {
  if (K < 6 || K % 2 != 0) throw InputError("dollar game: K must be even and at least 6");
  TakeoverGame game;
  game.K = K;
  game.drop_payoff.assign(K + 1, {0.0, 0.0});
  for (Index k = 1; k <= K; ++k) {
    const double kd = static_cast<double>(k);
    game.drop_payoff[k] = (k % 2 == 1) ? std::array<double, 2>{kd, 0.0} : std::array<double, 2>{0.0, kd};
  }
  game.end_payoff = {static_cast<double>(K + 2), 0.0};
  return game;
}

MaximalContinuation maximal_continuation(Index K) {
  MaximalContinuation mc;
  mc.correct_vs_correct.assign(K + 1, 1.0);
  mc.correct_vs_correct[0] = 0.0;
  mc.correct_vs_analogy.assign(K + 1, 0.0);
  mc.correct_vs_analogy[K - 1] = 1.0;
  mc.correct_vs_analogy[K] = 1.0;
  mc.analogy.assign(K + 1, 0.0);
  mc.analogy[K] = 1.0;
  return mc;
}

double analogy_conjecture(const TakeoverGame& game, const DropPlan& own, const DropPlan& opp_truth,
                          int role, double step) {
  if (!(step > 0.0 && step <= 1.0)) throw InputError("analogy_conjecture: step must lie in (0, 1]");
  const std::vector<double> data = role == 0 ? outcome_distribution(game, own, opp_truth)
                                             : outcome_distribution(game, opp_truth, own);
  const auto n = static_cast<Index>(std::llround(1.0 / step));
  DropPlan conj(game.K + 1, 0.0);
  std::vector<double> model(game.K + 2, 0.0);
  auto objective = [&](Index i) {
    const double x = std::min(1.0, static_cast<double>(i) * step);
    for (Index k = 1; k <= game.K; ++k) conj[k] = p1_moves(k) == (role == 1) ? x : 0.0;
    const DropPlan& p1 = role == 0 ? own : conj;
    const DropPlan& p2 = role == 0 ? conj : own;
    double reach = 1.0;
    for (Index k = 1; k <= game.K; ++k) {
      const double d = p1_moves(k) ? p1[k] : p2[k];
      model[k] = reach * d;
      reach *= 1.0 - d;
    }
    model[game.K + 1] = reach;
    return outcome_kl(data, model);
  };
  auto scan = [&](Index lo, Index hi, Index stride) {
    Index best_i = lo;
    double best = kInf;
    for (Index i = lo; i <= hi; i += stride) {
      const double kl = objective(i);
      if (kl < best) {
        best = kl;
        best_i = i;
      }
    }
    return best_i;
  };
  // The objective is -(a ln x + b ln(1-x)) + const, convex in x, so the
  // fine-grid minimizer lies within one coarse cell of the coarse one.
  const Index stride = std::max<Index>(1, n / 1000);
  const Index coarse = scan(0, n, stride);
  const Index lo = coarse > stride ? coarse - stride : 0;
  const Index hi = std::min(n, coarse + stride);
  return std::min(1.0, static_cast<double>(scan(lo, hi, 1)) * step);
}

double centipede_fitness_correct(const CentipedeSpec& s, double p) {
  const double kd = static_cast<double>(s.K);
  return (1.0 - p) * (0.5 * s.g * (kd - 2.0) / 2.0 + 0.5 * (s.g * kd / 2.0 + s.l));
}

double centipede_fitness_analogy(const CentipedeSpec& s, double p) {
  const double kd = static_cast<double>(s.K);
  const double mid = s.g * (kd - 2.0) / 2.0;
  return p * (0.5 * (mid - s.l) + 0.5 * mid) + (1.0 - p) * (0.5 * (mid - s.l) + 0.5 * (s.g * kd / 2.0 + s.l));
}

CentipedeReport centipede_analysis(const CentipedeSpec& spec) {
  const TakeoverGame game = centipede_game(spec);
  CentipedeReport rep;
  rep.applicable = spec.continuation_condition();
  const MaximalContinuation mc = maximal_continuation(spec.K);
  rep.analogy_minimizer_x = analogy_conjecture(game, mc.analogy, mc.correct_vs_analogy, 0, 1e-6);
  const double share = spec.l / (spec.g * static_cast<double>(spec.K - 2));
  rep.p_star_a = rep.applicable ? share : std::nan("");
  rep.p_star_b = rep.applicable ? 1.0 - share : std::nan("");

  verify_maximal_continuation(game, rep.checks);
  for (double p : {0.0, 0.25, 0.5, 1.0}) {
    const double scale = 1e-12 * std::max(1.0, spec.g * static_cast<double>(spec.K) + spec.l);
    add_check(rep.checks, "correct fitness at p=" + std::to_string(p), tree_fitness(game, p, true),
              centipede_fitness_correct(spec, p), scale);
    add_check(rep.checks, "analogy fitness at p=" + std::to_string(p), tree_fitness(game, p, false),
              centipede_fitness_analogy(spec, p), scale);
  }
  rep.maximal_continuation_verified = rep.applicable && all_pass(rep.checks);
  return rep;
}

ShareGapFunction centipede_gap_function(const CentipedeSpec& spec) {
  spec.validate();
  return [spec](double p) -> std::optional<double> {
    return centipede_fitness_correct(spec, p) - centipede_fitness_analogy(spec, p);
  };
}

double dollar_fitness_correct(Index K, double p) {
  const double kd = static_cast<double>(K);
  return p * 0.5 + (1.0 - p) * (0.5 * (kd - 1.0) + 0.5 * kd);
}

double dollar_fitness_analogy(Index K, double p) { return (1.0 - p) * 0.5 * static_cast<double>(K); }

DollarReport dollar_analysis(Index K) {
  const TakeoverGame game = dollar_game(K);
  DollarReport rep;
  rep.dominance = true;
  for (Index i = 0; i <= 100; ++i) {
    const double p = static_cast<double>(i) / 100.0;
    if (!(dollar_fitness_correct(K, p) > dollar_fitness_analogy(K, p))) rep.dominance = false;
  }
  verify_maximal_continuation(game, rep.checks);
  for (double p : {0.0, 0.5, 1.0}) {
    const double scale = 1e-12 * static_cast<double>(K);
    add_check(rep.checks, "correct fitness at p=" + std::to_string(p), tree_fitness(game, p, true),
              dollar_fitness_correct(K, p), scale);
    add_check(rep.checks, "analogy fitness at p=" + std::to_string(p), tree_fitness(game, p, false),
              dollar_fitness_analogy(K, p), scale);
  }
  rep.maximal_continuation_verified = all_pass(rep.checks);
  return rep;
}

ShareGapFunction dollar_gap_function(Index K) {
  dollar_game(K);
  return [K](double p) -> std::optional<double> {
    return dollar_fitness_correct(K, p) - dollar_fitness_analogy(K, p);
  };
}

}  // namespace zeitgeist
