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

// Equilibrium zeitgeists over pure strategy quadruples: verification,
// enumeration, and fitness.

#ifndef ZEITGEIST_EZ_SOLVER_HPP_
#define ZEITGEIST_EZ_SOLVER_HPP_

#include <iosfwd>
#include <utility>
#include <vector>

#include "zeitgeist/inference.hpp"

namespace zeitgeist {

// Sparse probability vector over a model's parameter indices.
using Belief = std::vector<std::pair<Index, double>>;

struct SituationEz {
  Index situation = 0;
  Quadruple play;
  Belief belief_a, belief_b;
  // No single minimizing parameter rationalizes the play; only a mixture does.
  bool mixture_supported = false;

  const Belief& belief(Group g) const { return g == Group::A ? belief_a : belief_b; }
};

struct Zeitgeist {
  Shares shares;
  std::vector<SituationEz> per_situation;  // indexed by situation
};

// Per-situation solution lists; the EZ set is their Cartesian product.
struct EzSolutions {
  Shares shares;
  std::vector<std::vector<SituationEz>> per_situation;

  bool empty() const;
  double count() const;
  // Throws InputError when the product exceeds `limit`.
  std::vector<Zeitgeist> materialize(Index limit = 1000000) const;
};

EzSolutions solve_ez(const StageEnv& env, const Model& model_a, const Model& model_b,
                     Shares shares);
std::vector<Zeitgeist> enumerate_ez(const StageEnv& env, const Model& model_a,
                                    const Model& model_b, Shares shares);

struct GroupCertificate {
  MinimizerSet minimizers;
  // Subjective payoff of every strategy against a group-A and a group-B opponent.
  std::vector<double> payoff_vs_a, payoff_vs_b;
  // Chosen strategy's payoff minus the best one; >= -1e-9 in an EZ.
  double slack_vs_a = 0.0, slack_vs_b = 0.0;
  std::vector<Index> off_support;  // belief mass outside the minimizer set
  bool ok = false;
};

struct EZCertificate {
  // [situation][group]
  std::vector<std::array<GroupCertificate, 2>> groups;
};

std::pair<bool, EZCertificate> verify_ez(const Zeitgeist& z, const StageEnv& env,
                                         const Model& model_a, const Model& model_b);

struct Fitness {
  double a = 0.0;
  double b = 0.0;
  double gap() const { return a - b; }
};

// Fitness within one situation.
Fitness situation_fitness(const SituationEz& s, Shares shares, const StageEnv& env);
Fitness fitness(const Zeitgeist& z, const StageEnv& env, const FitnessWeights& q);
// U(a_{g,g'}(G), a_{g',g}(G); F•(G)).
double conditional_fitness(const Zeitgeist& z, const StageEnv& env, Index situation, Group g,
                           Group g_prime);
double conditional_fitness(const SituationEz& s, const StageEnv& env, Group g, Group g_prime);

// Subjective payoff of each strategy against an opponent from group `opp`
// under belief mu.
std::vector<double> subjective_payoffs(const StageEnv& env, const Model& model, const Belief& mu,
                                       Group opp);

// One record per situation-level EZ, as JSON and as an aligned text table.
void write_ez_report_json(std::ostream& os, const EzSolutions& sol, const StageEnv& env,
                          const Model& model_a, const Model& model_b);
void write_ez_report_text(std::ostream& os, const EzSolutions& sol, const StageEnv& env,
                          const Model& model_a, const Model& model_b);

}  // namespace zeitgeist

#endif  // ZEITGEIST_EZ_SOLVER_HPP_
