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

// Agent-based learning: finite populations of Bayesian agents, random
// matching with replacement, noisy monitoring, and periodic situation
// redraws that reset beliefs.

#ifndef ZEITGEIST_LEARNING_SIM_HPP_
#define ZEITGEIST_LEARNING_SIM_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zeitgeist/ez_solver.hpp"

namespace zeitgeist {

struct LearningPolicy {
  // Uniform random play against a group until this many observations of it.
  Index burn_in = 10;
  // eps_t = eps0 / (1 + t / kappa). Exact best responses satisfy any eps_t,
  // so the schedule is recorded but does not change play.
  double eps0 = 0.1;
  double kappa = 100.0;
};

struct SimConfig {
  Index n_agents = 1000;  // total; group g gets round(n_agents * p_g)
  Shares shares;
  // Per group, over the model's parameters; empty means uniform.
  std::vector<double> prior_a, prior_b;
  double tau = 0.99;
  LearningPolicy policy;
  Index horizon = 1000;
  Index situation_period = 0;  // 0: never redraw after the first draw
  FitnessWeights situation_weights;  // empty means uniform
  unsigned long long seed = 1;
  unsigned threads = 0;  // 0: from ZEITGEIST_THREADS, else 1

  std::array<Index, 2> group_sizes() const;
};

// Flat per-period records.
struct LearningTrajectory {
  Index n_strategies = 0;
  std::array<Index, 2> n_params{};
  std::array<Index, 2> group_sizes{};
  Shares shares;
  Index situation_period = 0;
  std::vector<Index> situation;  // per period
  // Share of group g agents whose period action against g' is a, at
  // [(t * 4 + 2g + g') * n_strategies + a].
  std::vector<double> alpha;
  // Mean posterior of group g at the end of period t, [t * n_params[g] + k].
  std::array<std::vector<double>, 2> nu;
  // Mean realized payoff of group g in period t, [t * 2 + g].
  std::vector<double> payoff;
  // Observations no parameter could explain; the update was skipped.
  Index zero_likelihood_events = 0;

  Index periods() const { return situation.size(); }
  double play_share(Index t, Group g, Group opp, Index a) const {
    return alpha[((t * 4) + 2 * idx(g) + idx(opp)) * n_strategies + a];
  }
  double mean_payoff(Index t, Group g) const { return payoff[t * 2 + idx(g)]; }
  std::span<const double> belief(Index t, Group g) const {
    return {nu[idx(g)].data() + t * n_params[idx(g)], n_params[idx(g)]};
  }
};

LearningTrajectory run_learning(const StageEnv& env, const Model& model_a, const Model& model_b,
                                const SimConfig& cfg);

struct EzComparison {
  Index begin = 0, end = 0;  // periods compared
  Index situation = 0;
  Quadruple modal_play;
  std::array<std::vector<double>, 2> mean_belief;
  std::array<double, 2> mean_payoff{};
  // Standard error of the window mean, from per-period group means.
  std::array<double, 2> payoff_se{};
  std::optional<Index> nearest;  // position in the EZ list
  Index play_mismatch = 4;
  double belief_distance = kInf;  // max over groups of total variation
  bool converged = false;
  std::string note;
};

// Modal play and mean beliefs over periods [begin, end), all in one situation.
EzComparison compare_window(const LearningTrajectory& traj, const std::vector<Zeitgeist>& ez_list,
                            Index begin, Index end, double tol);
// Final `window` periods.
EzComparison compare_to_ez(const LearningTrajectory& traj, const std::vector<Zeitgeist>& ez_list,
                           Index window, double tol);
// Final `window` periods of every constant-situation segment.
std::vector<EzComparison> compare_segments(const LearningTrajectory& traj,
                                           const std::vector<Zeitgeist>& ez_list, Index window,
                                           double tol);

// Tab-separated rows per (period, group), every `every` periods.
void write_trajectory(std::ostream& os, const LearningTrajectory& traj, const StageEnv& env,
                      Index every = 1);
void write_comparison_json(std::ostream& os, const EzComparison& c, const StageEnv& env);

// Thread count from ZEITGEIST_THREADS, defaulting to 1.
unsigned default_threads();

}  // namespace zeitgeist

#endif  // ZEITGEIST_LEARNING_SIM_HPP_
