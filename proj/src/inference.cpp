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

#include "zeitgeist/inference.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace zeitgeist {

namespace {

bool within(double v, double best) {
  return v <= best + kTieTol * std::max(1.0, std::abs(best));
}

}  // namespace

ExtendedReal kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InputError("KL arguments have different lengths");
  check_probability_row(p, "KL first argument");
  check_probability_row(q, "KL second argument");
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInf;
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s > 0.0 ? s : 0.0;
}

ExtendedReal match_kl(const StageEnv& env, const Kernel& kernel, Index situation, Index own,
                      Index opp, Index conj) {
  const double m = env.monitoring_kl(opp, conj);
  if (m == kInf) return kInf;
  const double y = kl_divergence(env.kernel(situation).row(own, opp), kernel.row(own, conj));
  return y == kInf ? kInf : y + m;
}

ExtendedReal weighted_kl(const StageEnv& env, const Model& model, Index param,
                         const DataContext& ctx) {
  const Parameter th = model.parameter(param);
  const Group g = ctx.own_group;
  const Group h = other(g);
  const Kernel& k = model.kernel(th.kernel);
  const Index a_own = ctx.profile.play(g, g);
  const double p = ctx.shares.of(g);
  const ExtendedReal own = match_kl(env, k, ctx.situation, a_own, a_own, th.conj(g));
  const ExtendedReal cross = match_kl(env, k, ctx.situation, ctx.profile.play(g, h),
                                      ctx.profile.play(h, g), th.conj(h));
  const ExtendedReal a = weighted(p, own);
  const ExtendedReal b = weighted(1.0 - p, cross);
  return (a == kInf || b == kInf) ? kInf : a + b;
}

MinimizerSet kl_minimizers(const Model& model, const DataContext& ctx, const StageEnv& env) {
  const Group g = ctx.own_group;
  GroupInference gi(env, model, g, ctx.situation, ctx.shares.of(g));
  gi.set_cross(ctx.profile.play(g, other(g)), ctx.profile.play(other(g), g));
  return gi.minimizers(ctx.profile.play(g, g));
}

void write_scores_csv(std::ostream& os, const Model& model, const DataContext& ctx,
                      const StageEnv& env) {
  os << "index,conj_a,conj_b,kernel,weighted_kl\n";
  os.precision(17);
  for (Index i = 0; i < model.size(); ++i) {
    const Parameter th = model.parameter(i);
    const double v = weighted_kl(env, model, i, ctx);
    os << i << ',' << env.strategies()[th.conj_a] << ',' << env.strategies()[th.conj_b] << ','
       << th.kernel << ',';
    if (v == kInf) {
      os << "inf";
    } else {
      os << v;
    }
    os << '\n';
  }
}

GroupInference::GroupInference(const StageEnv& env, const Model& model, Group g, Index situation,
                               double p_g)
    : env_(env), model_(model), g_(g), situation_(situation), w_own_(p_g), w_cross_(1.0 - p_g) {
  if (model.num_strategies() != env.num_strategies()) {
    throw InputError("model '" + model.label() + "' does not match the environment");
  }
  const Index n_a = env.num_strategies();
  if (model.strategic_certainty_form()) {
    n_k_ = model.kernels().size();
    own_start_.assign(n_a * n_k_ + 1, 0);
    own_min_.assign(n_a * n_k_, kInf);
    own_all_finite_ = true;
    for (Index a = 0; a < n_a; ++a) {
      for (Index k = 0; k < n_k_; ++k) {
        const Index i = a * n_k_ + k;
        append_terms(own_flat_, model.kernel(k), a, a, w_own_ > 0.0);
        own_start_[i + 1] = own_flat_.size();
        for (const auto& [c, v] : own_terms(a, k)) own_min_[i] = std::min(own_min_[i], v);
        if (own_min_[i] == kInf) own_all_finite_ = false;
      }
    }
    if (w_cross_ == 0.0) {
      own_only_best_.resize(n_a);
      for (Index a = 0; a < n_a; ++a) {
        const auto first = own_min_.begin() + static_cast<long>(a * n_k_);
        const double best = *std::min_element(first, first + static_cast<long>(n_k_));
        for (Index k = 0; k < n_k_; ++k) {
          if (best < kInf && within(own_min_[a * n_k_ + k], best)) own_only_best_[a].push_back(k);
        }
      }
    }
  } else {
    const Index n_p = model.size();
    own_param_.assign(n_a, std::vector<double>(n_p));
    for (Index a = 0; a < n_a; ++a) {
      for (Index i = 0; i < n_p; ++i) {
        const Parameter th = model.parameter(i);
        own_param_[a][i] = match_kl(env, model.kernel(th.kernel), situation, a, a, th.conj(g));
      }
    }
  }
}

namespace {

bool kl_finite(const DistView& p, const DistView& q) {
  if (p.offset < q.offset || p.end() > q.end()) return false;
  if (q.full_support) return true;
  const Index shift = p.offset - q.offset;
  for (Index j = 0; j < p.mass.size(); ++j) {
    if (p.mass[j] > 0.0 && q.mass[j + shift] <= 0.0) return false;
  }
  return true;
}

}  // namespace

void GroupInference::append_terms(std::vector<Term>& out, const Kernel& k, Index own, Index opp,
                                  bool values) const {
  const DistView truth = env_.kernel(situation_).row(own, opp);
  for (Index c : env_.compatible_conjectures(opp)) {
    const DistView q = k.row(own, c);
    if (!values) {
      if (kl_finite(truth, q)) out.emplace_back(c, 0.0);
      continue;
    }
    const double y = kl_divergence(truth, q);
    if (y < kInf) out.emplace_back(c, y + env_.monitoring_kl(opp, c));
  }
}

void GroupInference::set_cross(Index x, Index y) {
  if (model_.strategic_certainty_form()) {
    cross_flat_.clear();
    cross_start_.assign(n_k_ + 1, 0);
    cross_min_.assign(n_k_, kInf);
    cross_all_finite_ = true;
    for (Index k = 0; k < n_k_; ++k) {
      append_terms(cross_flat_, model_.kernel(k), x, y, w_cross_ > 0.0);
      cross_start_[k + 1] = cross_flat_.size();
      for (const auto& [c, v] : cross_terms(k)) cross_min_[k] = std::min(cross_min_[k], v);
      if (cross_min_[k] == kInf) cross_all_finite_ = false;
    }
    cross_only_best_.clear();
    if (w_own_ == 0.0) {
      const double best = *std::min_element(cross_min_.begin(), cross_min_.end());
      for (Index k = 0; k < n_k_; ++k) {
        if (best < kInf && within(cross_min_[k], best)) cross_only_best_.push_back(k);
      }
    }
  } else {
    const Index n_p = model_.size();
    cross_param_.assign(n_p, kInf);
    for (Index i = 0; i < n_p; ++i) {
      const Parameter th = model_.parameter(i);
      cross_param_[i] = match_kl(env_, model_.kernel(th.kernel), situation_, x, y, th.conj(other(g_)));
    }
  }
}

MinimizerSet GroupInference::combine_sc(const std::vector<Index>& kernels, Index a) const {
  MinimizerSet out;
  std::vector<double> total(kernels.size());
  double best = kInf;
  for (Index i = 0; i < kernels.size(); ++i) {
    const Index k = kernels[i];
    const double o = weighted(w_own_, own_min_[a * n_k_ + k]);
    const double c = weighted(w_cross_, cross_min_[k]);
    total[i] = (o == kInf || c == kInf) ? kInf : o + c;
    best = std::min(best, total[i]);
  }
  if (best == kInf) {
    out.all_infinite = true;
    out.indices.resize(model_.size());
    for (Index i = 0; i < out.indices.size(); ++i) out.indices[i] = i;
    return out;
  }
  out.min_value = best;
  for (Index i = 0; i < kernels.size(); ++i) {
    if (!within(total[i], best)) continue;
    const Index k = kernels[i];
    for (const auto& [co, vo] : own_terms(a, k)) {
      const double wo = weighted(w_own_, vo);
      for (const auto& [cc, vc] : cross_terms(k)) {
        if (!within(wo + weighted(w_cross_, vc), best)) continue;
        out.indices.push_back(g_ == Group::A ? model_.sc_index(k, co, cc)
                                             : model_.sc_index(k, cc, co));
      }
    }
  }
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

MinimizerSet GroupInference::minimizers(Index a) {
  if (model_.strategic_certainty_form()) {
    if (w_own_ == 0.0 && own_all_finite_) return combine_sc(cross_only_best_, a);
    if (w_cross_ == 0.0 && cross_all_finite_) return combine_sc(own_only_best_[a], a);
    std::vector<Index> all(n_k_);
    for (Index k = 0; k < all.size(); ++k) all[k] = k;
    return combine_sc(all, a);
  }
  MinimizerSet out;
  const Index n_p = model_.size();
  std::vector<double> total(n_p);
  double best = kInf;
  for (Index i = 0; i < n_p; ++i) {
    const double o = weighted(w_own_, own_param_[a][i]);
    const double c = weighted(w_cross_, cross_param_[i]);
    total[i] = (o == kInf || c == kInf) ? kInf : o + c;
    best = std::min(best, total[i]);
  }
  if (best == kInf) {
    out.all_infinite = true;
    for (Index i = 0; i < n_p; ++i) out.indices.push_back(i);
    return out;
  }
  out.min_value = best;
  for (Index i = 0; i < n_p; ++i) {
    if (within(total[i], best)) out.indices.push_back(i);
  }
  return out;
}

}  // namespace zeitgeist
