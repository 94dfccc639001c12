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

// Subjective models: finite lists of parameters (conjectured opponent play
// for each group, conjectured kernel), and the named model families.

#ifndef ZEITGEIST_MODEL_SPACE_HPP_
#define ZEITGEIST_MODEL_SPACE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "zeitgeist/game_core.hpp"

namespace zeitgeist {

struct Parameter {
  Index conj_a = 0;  // conjectured play of a group-A opponent
  Index conj_b = 0;  // conjectured play of a group-B opponent
  Index kernel = 0;  // position in Model::kernels()

  Index conj(Group g) const { return g == Group::A ? conj_a : conj_b; }
  bool operator==(const Parameter&) const = default;
};

// Either an explicit parameter list, or the strategic-certainty form
// A^2 x {kernels}, stored implicitly. In the latter, parameter index is
// (kernel * n_A + conj_a) * n_A + conj_b.
class Model {
 public:
  static Model strategic_certainty(std::string label, std::vector<KernelPtr> kernels,
                                   Index n_strategies);
  static Model with_parameters(std::string label, std::vector<KernelPtr> kernels,
                               std::vector<Parameter> params, Index n_strategies);

  const std::string& label() const { return label_; }
  bool strategic_certainty_form() const { return sc_form_; }
  Index size() const;
  Parameter parameter(Index i) const;
  Index sc_index(Index kernel, Index conj_a, Index conj_b) const {
    return (kernel * n_a_ + conj_a) * n_a_ + conj_b;
  }
  Index num_strategies() const { return n_a_; }
  const std::vector<KernelPtr>& kernels() const { return kernels_; }
  const Kernel& kernel(Index k) const { return *kernels_[k]; }
  const std::vector<Parameter>& explicit_parameters() const { return params_; }

  // Mixing weight used by the illusion-of-control builder, kept for export.
  std::optional<double> perturb_eps;

 private:
  std::string label_;
  std::vector<KernelPtr> kernels_;
  std::vector<Parameter> params_;
  Index n_a_ = 0;
  bool sc_form_ = false;
};

// A^2 x {F•(., ., G)}, duplicates removed.
Model minimal_correct_model(const StageEnv& env);

// A^2 x {kernel}.
Model singleton_model(const StageEnv& env, KernelPtr kernel, std::string label = "singleton");

// One blind kernel per situation: own strategy a maps to F•(a, BR(a, G), G)
// with the follower breaking ties against a, mixed with uniform at weight
// perturb_eps. Throws ConstructionError when some profile's best-fitting
// situation is not unique.
Model illusion_of_control_model(const StageEnv& env, double perturb_eps);

struct Identifiability {
  bool situation_id = true;
  bool stackelberg_id = true;
};
Identifiability check_identifiability(const StageEnv& env);

}  // namespace zeitgeist

#endif  // ZEITGEIST_MODEL_SPACE_HPP_
