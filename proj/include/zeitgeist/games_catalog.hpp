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

// Builders and closed-form analyses for the worked examples: Cournot
// duopoly, the investment game, the three-strategy two-situation example,
// and the centipede and dollar games.

#ifndef ZEITGEIST_GAMES_CATALOG_HPP_
#define ZEITGEIST_GAMES_CATALOG_HPP_

#include <string>
#include <vector>

#include "zeitgeist/model_space.hpp"
#include "zeitgeist/stability.hpp"

namespace zeitgeist {

// ---- Cournot -------------------------------------------------------------

struct CournotSpec {
  double beta = 10.0;  // demand intercept
  double c = 2.0;      // marginal cost
  double r = 1.0;      // true slope
  double r_hat = 0.5;  // slope perceived by entrants

  void validate() const;
};

struct CournotReport {
  double a_aa = 0.0;
  double resident_fitness = 0.0;
  double a_stack = 0.0;
  double a_ba = 0.0;
  double entrant_fitness = 0.0;
};

CournotReport cournot_closed_form(const CournotSpec& spec);
// Entrant fitness as a function of the perceived slope.
double cournot_entrant_fitness(const CournotSpec& spec, double r_hat);

struct CournotDiscrete {
  StageEnv env;
  Model model_a;
  Model model_b;
  std::vector<double> intercepts;
  // Distance from the closed-form entrant intercept to the nearest grid value.
  double intercept_residual = 0.0;
  std::vector<std::string> warnings;
};

std::vector<double> uniform_grid(double lo, double hi, Index n);

// Quantity grid as the strategy set; price noise discretized into
// `price_bins` equal-width bins spanning every kernel mean +/- 4 sd.
CournotDiscrete build_cournot_discrete(const CournotSpec& spec, const std::vector<double>& grid,
                                       Index price_bins, double noise_sd);

// ---- Investment game -----------------------------------------------------

struct InvestmentSpec {
  double b = 1.0;
  double c = 5.5;
  double m = 12.0;
};

struct InvestmentConditions {
  bool condition1 = false;  // 5b < c < 6b
  bool condition2 = false;  // c < 4b + m/3 and c < 5b + m/4
};

InvestmentConditions check_conditions(const InvestmentSpec& spec);
// Misspecified-slope value that fits data from profile (a_i, a_{-i}) exactly.
double investment_b_star(const InvestmentSpec& spec, int a_i, int a_j);

struct InvestmentGame {
  StageEnv env;
  Model model_a;  // correctly specified singleton
  Model model_b;  // A^2 x {P = b(a_i + a_j) - m + noise : b in b_grid}
  std::vector<double> b_grid;
  double b_star_11 = 0.0, b_star_12 = 0.0, b_star_22 = 0.0;
  InvestmentConditions conditions;
};

InvestmentGame build_investment_game(const InvestmentSpec& spec, double noise_sd = 3.0);

// ---- Three-strategy, two-situation example -------------------------------

StageEnv build_example1();

// ---- Centipede and dollar games ------------------------------------------

// Alternating-move game on nodes 1..K; P1 moves at odd nodes. Dropping at
// node k ends the game with drop_payoff[k] = (P1, P2).
struct TakeoverGame {
  Index K = 0;
  std::vector<std::array<double, 2>> drop_payoff;  // index 1..K
  std::array<double, 2> end_payoff{};
};

// Drop probability at each node 1..K (index 0 unused). A strategy in the
// symmetrized game uses its odd entries as P1 and its even entries as P2.
using DropPlan = std::vector<double>;

// Probabilities of z_1..z_K and z_end (index K + 1); index 0 unused.
std::vector<double> outcome_distribution(const TakeoverGame& game, const DropPlan& p1,
                                         const DropPlan& p2);
// Expected payoff to role (0 = P1, 1 = P2).
double role_payoff(const TakeoverGame& game, const DropPlan& p1, const DropPlan& p2, int role);
// Role-averaged payoff of `me` against `opp`.
double symmetrized_payoff(const TakeoverGame& game, const DropPlan& me, const DropPlan& opp);
// Best payoff `role` can reach against a fixed opponent plan.
double best_role_value(const TakeoverGame& game, const DropPlan& opp, int role);

struct CentipedeSpec {
  Index K = 10;
  double g = 1.0;
  double l = 2.0;

  void validate() const;
  bool continuation_condition() const;  // g > 2l / (K - 2)
};

TakeoverGame centipede_game(const CentipedeSpec& spec);
TakeoverGame dollar_game(Index K);

// Named strategies of the maximal-continuation EZ.
struct MaximalContinuation {
  DropPlan correct_vs_correct;
  DropPlan correct_vs_analogy;
  DropPlan analogy;  // against either group
};
MaximalContinuation maximal_continuation(Index K);

// Fitness of the correct and analogy models when a share p is correct.
double centipede_fitness_correct(const CentipedeSpec& spec, double p);
double centipede_fitness_analogy(const CentipedeSpec& spec, double p);

struct EzCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double expected = 0.0;
};

struct CentipedeReport {
  bool applicable = false;
  bool maximal_continuation_verified = false;
  double analogy_minimizer_x = 0.0;
  double p_star_a = 0.0;  // correct share at the stable point
  double p_star_b = 0.0;
  std::vector<EzCheck> checks;
};

CentipedeReport centipede_analysis(const CentipedeSpec& spec);
ShareGapFunction centipede_gap_function(const CentipedeSpec& spec);

double dollar_fitness_correct(Index K, double p);
double dollar_fitness_analogy(Index K, double p);

struct DollarReport {
  bool dominance = false;  // correct strictly ahead on the 101-point grid
  bool maximal_continuation_verified = false;
  std::vector<EzCheck> checks;
};

DollarReport dollar_analysis(Index K);
ShareGapFunction dollar_gap_function(Index K);

// Minimizes the analogy KL objective over the drop rate on a uniform grid of
// the given step, for data from plans (truth_p1, truth_p2) in which `role`
// is played by the analogy agent with `own` plan. Returns the argmin.
double analogy_conjecture(const TakeoverGame& game, const DropPlan& own, const DropPlan& opp_truth,
                          int role, double step);

}  // namespace zeitgeist

#endif  // ZEITGEIST_GAMES_CATALOG_HPP_
