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

#include "zeitgeist/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zeitgeist {

namespace {

double row_distance(const DistView& p, const DistView& q) {
  double d = 0.0;
  const Index lo = std::min(p.offset, q.offset);
  const Index hi = std::max(p.end(), q.end());
  for (Index y = lo; y < hi; ++y) d = std::max(d, std::abs(p.at(y) - q.at(y)));
  return d;
}

}  // namespace

Model Model::strategic_certainty(std::string label, std::vector<KernelPtr> kernels,
                                 Index n_strategies) {
  if (kernels.empty()) throw InputError("model '" + label + "' has no kernels");
  for (const auto& k : kernels) {
    if (!k || k->num_strategies() != n_strategies) {
      throw InputError("model '" + label + "' has a kernel of the wrong shape");
    }
  }
  Model m;
  m.label_ = std::move(label);
  m.kernels_ = std::move(kernels);
  m.n_a_ = n_strategies;
  m.sc_form_ = true;
  return m;
}

Model Model::with_parameters(std::string label, std::vector<KernelPtr> kernels,
                             std::vector<Parameter> params, Index n_strategies) {
  if (params.empty()) throw InputError("model '" + label + "' has no parameters");
  Model m = strategic_certainty(std::move(label), std::move(kernels), n_strategies);
  for (const auto& p : params) {
    if (p.kernel >= m.kernels_.size() || p.conj_a >= n_strategies || p.conj_b >= n_strategies) {
      throw InputError("model '" + m.label_ + "' has a parameter with an out-of-range index");
    }
  }
  m.params_ = std::move(params);
  m.sc_form_ = false;
  return m;
}

Index Model::size() const {
  return sc_form_ ? kernels_.size() * n_a_ * n_a_ : params_.size();
}

Parameter Model::parameter(Index i) const {
  if (!sc_form_) return params_.at(i);
  if (i >= size()) throw InputError("parameter index out of range");
  return Parameter{(i / n_a_) % n_a_, i % n_a_, i / (n_a_ * n_a_)};
}

Model minimal_correct_model(const StageEnv& env) {
  std::vector<KernelPtr> kernels;
  for (Index s = 0; s < env.num_situations(); ++s) {
    const KernelPtr& k = env.kernel_ptr(s);
    const bool dup = std::any_of(kernels.begin(), kernels.end(), [&](const KernelPtr& seen) {
      return max_abs_difference(*seen, *k) <= kIdentTol;
    });
    if (!dup) kernels.push_back(k);
  }
  return Model::strategic_certainty("minimal-correct", std::move(kernels), env.num_strategies());
}

Model singleton_model(const StageEnv& env, KernelPtr kernel, std::string label) {
  if (!kernel || kernel->num_strategies() != env.num_strategies() ||
      kernel->num_consequences() != env.num_consequences()) {
    throw InputError("singleton kernel does not match the environment");
  }
  for (Index i = 0; i < env.num_strategies(); ++i) {
    for (Index j = 0; j < env.num_strategies(); ++j) {
      check_probability_row(kernel->dense_row(i, j), "singleton kernel row");
    }
  }
  return Model::strategic_certainty(std::move(label), {std::move(kernel)}, env.num_strategies());
}

Model illusion_of_control_model(const StageEnv& env, double perturb_eps) {
  const Index n_a = env.num_strategies();
  const Index n_s = env.num_situations();
  double min_mass = kInf;
  for (Index s = 0; s < n_s; ++s) {
    for (Index i = 0; i < n_a; ++i) {
      for (Index j = 0; j < n_a; ++j) {
        for (double m : env.kernel(s).row(i, j).mass) {
          if (m > 0.0) min_mass = std::min(min_mass, m);
        }
      }
    }
  }
  if (!(perturb_eps > 0.0 && perturb_eps < min_mass)) {
    std::ostringstream os;
    os << "perturb_eps must lie in (0, " << min_mass << "), got " << perturb_eps;
    throw InputError(os.str());
  }
  std::vector<KernelPtr> kernels;
  for (Index s = 0; s < n_s; ++s) {
    if (!stackelberg(env, s).unique) {
      throw InputError("Stackelberg strategy is not unique in situation '" + env.situations()[s] + "'");
    }
    std::vector<std::vector<double>> rows;
    for (Index a = 0; a < n_a; ++a) {
      rows.push_back(env.kernel(s).dense_row(a, min_tiebreak_best_response(env, s, a)));
    }
    kernels.push_back(mix_with_uniform(BlindKernel(env.num_consequences(), rows), perturb_eps));
  }
  // Every true profile must have a unique best-fitting situation kernel.
  for (Index s = 0; s < n_s; ++s) {
    for (Index i = 0; i < n_a; ++i) {
      for (Index j = 0; j < n_a; ++j) {
        const DistView truth = env.kernel(s).row(i, j);
        std::vector<double> d(n_s);
        for (Index k = 0; k < n_s; ++k) d[k] = kl_divergence(truth, kernels[k]->row(i, j));
        const double best = *std::min_element(d.begin(), d.end());
        const auto ties = std::count_if(d.begin(), d.end(), [&](double v) {
          return v <= best + kTieTol * std::max(1.0, std::abs(best));
        });
        if (ties > 1) {
          std::ostringstream os;
          os << "illusion-of-control kernels tie at profile (" << env.strategies()[i] << ", "
             << env.strategies()[j] << ") in situation '" << env.situations()[s]
             << "'; try a different perturb_eps";
          throw ConstructionError(os.str());
        }
      }
    }
  }
  Model m = Model::strategic_certainty("illusion-of-control", std::move(kernels), n_a);
  m.perturb_eps = perturb_eps;
  return m;
}

Identifiability check_identifiability(const StageEnv& env) {
  Identifiability out;
  const Index n_a = env.num_strategies();
  const Index n_s = env.num_situations();
  for (Index s = 0; s < n_s; ++s) {
    for (Index t = s + 1; t < n_s; ++t) {
      for (Index i = 0; i < n_a; ++i) {
        for (Index j = 0; j < n_a; ++j) {
          if (row_distance(env.kernel(s).row(i, j), env.kernel(t).row(i, j)) <= kIdentTol) {
            out.situation_id = false;
          }
        }
      }
    }
  }
  for (Index s = 0; s < n_s; ++s) {
    const Index lead = stackelberg(env, s).strategy;
    for (Index t = 0; t < n_s; ++t) {
      if (t == s) continue;
      for (Index r : best_responses(env, s, lead)) {
        for (Index r2 : best_responses(env, t, lead)) {
          if (row_distance(env.kernel(s).row(lead, r), env.kernel(t).row(lead, r2)) <= kIdentTol) {
            out.stackelberg_id = false;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace zeitgeist
