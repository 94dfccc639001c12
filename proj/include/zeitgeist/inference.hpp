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

// KL divergence and the weighted-KL objective that pins down which
// parameters an equilibrium belief may support.

#ifndef ZEITGEIST_INFERENCE_HPP_
#define ZEITGEIST_INFERENCE_HPP_

#include <iosfwd>
#include <utility>
#include <vector>

#include "zeitgeist/model_space.hpp"

namespace zeitgeist {

// Extended reals are doubles; +infinity is kInf.
using ExtendedReal = double;

struct DataContext {
  Group own_group = Group::A;
  Shares shares;
  Index situation = 0;
  Quadruple profile;
};

// Dense KL(P || Q). Throws InputError on length mismatch or invalid rows.
ExtendedReal kl_divergence(std::span<const double> p, std::span<const double> q);

// w·v with the convention 0·inf = inf.
inline ExtendedReal weighted(double w, ExtendedReal v) {
  if (v == kInf) return kInf;
  return w * v;
}

// KL of the data from one match type: the consequence factor over Y plus
// the signal factor over M. `own` is the agent's action, `opp` the actual
// opponent action and `conj` the conjectured one.
ExtendedReal match_kl(const StageEnv& env, const Kernel& kernel, Index situation, Index own,
                      Index opp, Index conj);

ExtendedReal weighted_kl(const StageEnv& env, const Model& model, Index param,
                         const DataContext& ctx);

struct MinimizerSet {
  std::vector<Index> indices;  // ascending
  ExtendedReal min_value = kInf;
  bool all_infinite = false;
};

MinimizerSet kl_minimizers(const Model& model, const DataContext& ctx, const StageEnv& env);

// One row per parameter: index, conj_a, conj_b, kernel, objective.
void write_scores_csv(std::ostream& os, const Model& model, const DataContext& ctx,
                      const StageEnv& env);

// Minimizer sets for one group in one situation at fixed shares, reused
// across the quadruples an enumeration visits. Data from own-group matches
// depends only on a_gg; cross-group data only on (a_{g,-g}, a_{-g,g}), so
// both halves are cached separately.
class GroupInference {
 public:
  GroupInference(const StageEnv& env, const Model& model, Group g, Index situation, double p_g);

  // Cross-group data: own action x against actual opponent action y.
  void set_cross(Index x, Index y);
  MinimizerSet minimizers(Index own_action);

 private:
  using Term = std::pair<Index, double>;  // (conjecture, finite value)

  // Appends the finite terms for kernel k on data (own, opp) to `out`. When
  // `values` is false only finiteness is decided and the values are zero.
  void append_terms(std::vector<Term>& out, const Kernel& k, Index own, Index opp,
                    bool values) const;
  MinimizerSet combine_sc(const std::vector<Index>& kernels, Index own_action) const;
  std::span<const Term> own_terms(Index a, Index k) const {
    const Index i = a * n_k_ + k;
    return {own_flat_.data() + own_start_[i], own_start_[i + 1] - own_start_[i]};
  }
  std::span<const Term> cross_terms(Index k) const {
    return {cross_flat_.data() + cross_start_[k], cross_start_[k + 1] - cross_start_[k]};
  }

  const StageEnv& env_;
  const Model& model_;
  Group g_;
  Index situation_;
  double w_own_, w_cross_;
  Index n_k_ = 0;

  // Strategic-certainty form, stored flat: [action][kernel] and [kernel].
  std::vector<Term> own_flat_;
  std::vector<Index> own_start_;
  std::vector<double> own_min_;
  std::vector<Term> cross_flat_;
  std::vector<Index> cross_start_;
  std::vector<double> cross_min_;
  bool own_all_finite_ = false;
  bool cross_all_finite_ = false;
  std::vector<Index> cross_only_best_;  // kernels minimizing cross data when own is moot
  std::vector<std::vector<Index>> own_only_best_;  // per action, when cross is moot

  // Explicit form: per parameter.
  std::vector<std::vector<double>> own_param_;  // [action][param]
  std::vector<double> cross_param_;
};

}  // namespace zeitgeist

#endif  // ZEITGEIST_INFERENCE_HPP_
