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

#include "zeitgeist/game_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace zeitgeist {

Monitoring Monitoring::perfect(const std::vector<std::string>& strategies) {
  return noisy(strategies, 1.0);
}

Monitoring Monitoring::uninformative(Index n_strategies) {
  Monitoring m;
  m.signals = {"none"};
  m.dist.assign(n_strategies, std::vector<double>{1.0});
  return m;
}

Monitoring Monitoring::noisy(const std::vector<std::string>& strategies, double tau) {
  Monitoring m;
  m.signals = strategies;
  const Index n = strategies.size();
  const double off = (1.0 - tau) / static_cast<double>(n);
  m.dist.assign(n, std::vector<double>(n, off));
  for (Index i = 0; i < n; ++i) m.dist[i][i] += tau;
  return m;
}

StageEnv::StageEnv(std::vector<std::string> strategies, std::vector<std::string> consequences,
                   std::vector<std::string> situations, std::vector<KernelPtr> kernels,
                   std::vector<double> utility, Monitoring monitoring)
    : strategies_(std::move(strategies)),
      consequences_(std::move(consequences)),
      situations_(std::move(situations)),
      kernels_(std::move(kernels)),
      utility_(std::move(utility)),
      monitoring_(std::move(monitoring)) {
  const Index n_a = strategies_.size();
  const Index n_y = consequences_.size();
  if (n_a == 0) throw InputError("environment needs at least one strategy");
  if (situations_.empty()) throw InputError("environment needs at least one situation");
  if (kernels_.size() != situations_.size()) {
    throw InputError("environment needs exactly one kernel per situation");
  }
  if (utility_.size() != n_y) throw InputError("utility table length differs from consequence count");
  for (double u : utility_) {
    if (!std::isfinite(u)) throw InputError("utility values must be finite");
  }
  for (Index s = 0; s < kernels_.size(); ++s) {
    const auto& k = kernels_[s];
    if (!k || k->num_strategies() != n_a || k->num_consequences() != n_y) {
      throw InputError("kernel for situation '" + situations_[s] + "' has the wrong shape");
    }
  }
  if (monitoring_.dist.size() != n_a) throw InputError("monitoring needs one row per strategy");
  for (Index a = 0; a < n_a; ++a) {
    if (monitoring_.dist[a].size() != monitoring_.signals.size()) {
      throw InputError("monitoring row length differs from signal count");
    }
    check_probability_row(monitoring_.dist[a], "monitoring row " + std::to_string(a));
  }

  payoffs_.resize(situations_.size() * n_a * n_a);
  for (Index s = 0; s < situations_.size(); ++s) {
    for (Index i = 0; i < n_a; ++i) {
      for (Index j = 0; j < n_a; ++j) {
        payoffs_[(s * n_a + i) * n_a + j] = expectation(kernels_[s]->row(i, j), utility_);
      }
    }
  }
  monitoring_kl_.assign(n_a * n_a, 0.0);
  for (Index t = 0; t < n_a; ++t) {
    for (Index c = 0; c < n_a; ++c) {
      double s = 0.0;
      const auto& p = monitoring_.dist[t];
      const auto& q = monitoring_.dist[c];
      for (Index m = 0; m < p.size(); ++m) {
        if (p[m] <= 0.0) continue;
        if (q[m] <= 0.0) {
          s = kInf;
          break;
        }
        s += p[m] * std::log(p[m] / q[m]);
      }
      monitoring_kl_[t * n_a + c] = s > 0.0 ? s : 0.0;
    }
  }
  compatible_.resize(n_a);
  for (Index t = 0; t < n_a; ++t) {
    for (Index c = 0; c < n_a; ++c) {
      if (monitoring_kl_[t * n_a + c] < kInf) compatible_[t].push_back(c);
    }
  }
}

Index StageEnv::strategy_index(std::string_view label) const {
  auto it = std::find(strategies_.begin(), strategies_.end(), label);
  if (it == strategies_.end()) throw InputError("unknown strategy '" + std::string(label) + "'");
  return static_cast<Index>(it - strategies_.begin());
}

Index StageEnv::situation_index(std::string_view label) const {
  auto it = std::find(situations_.begin(), situations_.end(), label);
  if (it == situations_.end()) throw InputError("unknown situation '" + std::string(label) + "'");
  return static_cast<Index>(it - situations_.begin());
}

FitnessWeights::FitnessWeights(std::vector<double> weights) : q(std::move(weights)) {
  check_probability_row(q, "situation weights");
}

FitnessWeights FitnessWeights::uniform(Index n) {
  return FitnessWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double expected_payoff(const StageEnv& env, const Kernel& kernel, Index own, Index opp) {
  return expectation(kernel.row(own, opp), env.utility());
}

double expected_payoff(const StageEnv& env, std::string_view situation, std::string_view own,
                       std::string_view opp, const Kernel& kernel) {
  env.situation_index(situation);
  return expected_payoff(env, kernel, env.strategy_index(own), env.strategy_index(opp));
}

std::vector<Index> best_responses(const StageEnv& env, Index situation, Index opp) {
  std::vector<double> col(env.num_strategies());
  for (Index a = 0; a < col.size(); ++a) col[a] = env.payoff(situation, a, opp);
  return argmax_set(col);
}

Index min_tiebreak_best_response(const StageEnv& env, Index situation, Index own) {
  Index best = 0;
  double worst = kInf;
  // Ascending scan with a strict improvement keeps the lowest index on ties.
  for (Index r : best_responses(env, situation, own)) {
    const double u = env.payoff(situation, own, r);
    if (u < worst - kTieTol) {
      worst = u;
      best = r;
    }
  }
  return best;
}

SymmetricNash symmetric_nash(const StageEnv& env, Index situation) {
  SymmetricNash out;
  for (Index a = 0; a < env.num_strategies(); ++a) {
    const auto br = best_responses(env, situation, a);
    if (std::find(br.begin(), br.end(), a) == br.end()) continue;
    const double v = env.payoff(situation, a, a);
    if (!out.exists || v > out.v_ne) out.v_ne = v;
    out.exists = true;
    out.strategies.push_back(a);
  }
  return out;
}

Stackelberg stackelberg(const StageEnv& env, Index situation) {
  std::vector<double> value(env.num_strategies());
  std::vector<Index> follower(env.num_strategies());
  for (Index a = 0; a < value.size(); ++a) {
    follower[a] = min_tiebreak_best_response(env, situation, a);
    value[a] = env.payoff(situation, a, follower[a]);
  }
  const auto top = argmax_set(value);
  Stackelberg out;
  // The first index within tolerance may not be the exact maximizer.
  out.strategy = top.front();
  for (Index a : top) {
    if (value[a] > value[out.strategy]) out.strategy = a;
  }
  out.follower = follower[out.strategy];
  out.v_bar = value[out.strategy];
  out.unique = top.size() == 1;
  return out;
}

}  // namespace zeitgeist
