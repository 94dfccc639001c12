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

// Finite symmetric stage games with one or more situations, plus the
// objective payoff, best-response, Nash and Stackelberg computations.

#ifndef ZEITGEIST_GAME_CORE_HPP_
#define ZEITGEIST_GAME_CORE_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "zeitgeist/kernel.hpp"

namespace zeitgeist {

// Signal distribution phi(a_{-i}) over M, one row per opponent strategy.
struct Monitoring {
  std::vector<std::string> signals;
  std::vector<std::vector<double>> dist;

  // M = A and the signal is the opponent's strategy.
  static Monitoring perfect(const std::vector<std::string>& strategies);
  // A single constant signal.
  static Monitoring uninformative(Index n_strategies);
  // Correct with probability tau, otherwise uniform over A.
  static Monitoring noisy(const std::vector<std::string>& strategies, double tau);
};

class StageEnv {
 public:
  StageEnv(std::vector<std::string> strategies, std::vector<std::string> consequences,
           std::vector<std::string> situations, std::vector<KernelPtr> kernels,
           std::vector<double> utility, Monitoring monitoring);

  Index num_strategies() const { return strategies_.size(); }
  Index num_consequences() const { return consequences_.size(); }
  Index num_situations() const { return situations_.size(); }
  const std::vector<std::string>& strategies() const { return strategies_; }
  const std::vector<std::string>& consequences() const { return consequences_; }
  const std::vector<std::string>& situations() const { return situations_; }
  const std::vector<double>& utility() const { return utility_; }
  const Monitoring& monitoring() const { return monitoring_; }

  // Throw InputError on unknown labels.
  Index strategy_index(std::string_view label) const;
  Index situation_index(std::string_view label) const;

  const Kernel& kernel(Index situation) const { return *kernels_.at(situation); }
  const KernelPtr& kernel_ptr(Index situation) const { return kernels_.at(situation); }

  // U(a_i, a_{-i}; F•(G)), cached.
  double payoff(Index situation, Index own, Index opp) const {
    return payoffs_[(situation * num_strategies() + own) * num_strategies() + opp];
  }
  // KL(phi(truth) || phi(conj)) over signals, cached.
  double monitoring_kl(Index truth, Index conj) const {
    return monitoring_kl_[truth * num_strategies() + conj];
  }
  // Conjectures c with KL(phi(truth) || phi(c)) finite, ascending.
  const std::vector<Index>& compatible_conjectures(Index truth) const {
    return compatible_[truth];
  }

 private:
  std::vector<std::string> strategies_, consequences_, situations_;
  std::vector<KernelPtr> kernels_;
  std::vector<double> utility_;
  Monitoring monitoring_;
  std::vector<double> payoffs_;
  std::vector<double> monitoring_kl_;
  std::vector<std::vector<Index>> compatible_;
};

struct FitnessWeights {
  std::vector<double> q;

  FitnessWeights() = default;
  // Validates a probability vector.
  explicit FitnessWeights(std::vector<double> weights);
  static FitnessWeights uniform(Index n);
};

// Σ_y F(a_i, a_{-i})(y)·π(y).
double expected_payoff(const StageEnv& env, const Kernel& kernel, Index own, Index opp);
double expected_payoff(const StageEnv& env, std::string_view situation, std::string_view own,
                       std::string_view opp, const Kernel& kernel);

// Objective best responses to a_{-i} in G, ascending.
std::vector<Index> best_responses(const StageEnv& env, Index situation, Index opp);

// The responder's best reply to a_i that is worst for the a_i-user; lowest
// index among remaining ties.
Index min_tiebreak_best_response(const StageEnv& env, Index situation, Index own);

struct SymmetricNash {
  std::vector<Index> strategies;
  double v_ne = 0.0;
  bool exists = false;
};
SymmetricNash symmetric_nash(const StageEnv& env, Index situation);

struct Stackelberg {
  Index strategy = 0;
  Index follower = 0;
  double v_bar = 0.0;
  bool unique = true;
};
Stackelberg stackelberg(const StageEnv& env, Index situation);

}  // namespace zeitgeist

#endif  // ZEITGEIST_GAME_CORE_HPP_
