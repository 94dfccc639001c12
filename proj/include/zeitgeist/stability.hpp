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

// Evolutionary stability verdicts, stability reversals, stable population
// shares, and the singleton-invasion separation check.

#ifndef ZEITGEIST_STABILITY_HPP_
#define ZEITGEIST_STABILITY_HPP_

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zeitgeist/ez_solver.hpp"

namespace zeitgeist {

enum class Classification { kStable, kFragile, kAmbiguous, kNoEz };
const char* to_string(Classification c);

struct EpsEvidence {
  double eps = 0.0;
  double ez_count = 0.0;
  // fit_A - fit_B over all EZs at this entrant share; NaN when there are none.
  double min_gap = 0.0;
  double max_gap = 0.0;
  bool mixture_present = false;
};

struct StabilityVerdict {
  Classification classification = Classification::kNoEz;
  std::vector<EpsEvidence> evidence;
};

std::vector<double> default_eps_list();

// Residents hold model_a, entrants model_b at share eps.
StabilityVerdict classify_stability(const StageEnv& env, const Model& model_a,
                                    const Model& model_b, const FitnessWeights& q,
                                    const std::vector<double>& eps_list = default_eps_list());

struct ReversalResult {
  bool reversal = false;
  EzSolutions at_a_dominant;  // shares (1, 0)
  EzSolutions at_b_dominant;  // shares (0, 1)
  bool mixture_present = false;
  std::string reason;
};

// Single-situation environments only.
ReversalResult detect_reversal(const StageEnv& env, const Model& model_a, const Model& model_b);

// fit_A - fit_B in the selected EZ at group-A share p; nullopt when the
// selector finds no EZ there.
using ShareGapFunction = std::function<std::optional<double>(double p_a)>;

struct StableSharesResult {
  std::vector<double> shares_a;    // p_A* with + below and - above
  std::vector<double> gap_points;  // grid points without a selected EZ
  std::vector<std::pair<double, double>> scan;  // (p_A, gap) where defined
};

StableSharesResult stable_shares(const ShareGapFunction& gap, Index grid_n, double tol);

enum class EzSelector { kLexicographicFirst };
StableSharesResult stable_shares(const StageEnv& env, const Model& model_a, const Model& model_b,
                                 const FitnessWeights& q, Index grid_n, double tol,
                                 EzSelector selector = EzSelector::kLexicographicFirst);

struct SeparationResult {
  std::vector<double> v_ne;  // per situation
  // v^b per enumerated best-response correspondence; -inf where no profile qualifies.
  std::vector<std::vector<double>> candidate_points;
  std::optional<std::vector<double>> separating_q;
  double margin = 0.0;      // q·v_NE - max_b q·v^b at the reported q
  double lp_margin = 0.0;   // before tilting toward full support
  double tilt = 0.0;        // weight on the uniform distribution
  bool functions_only = false;  // set-valued responses were too many to list
};

// v^b for a response correspondence given as bitmasks: bit a_i of masks[a_{-i}]
// is set when a_i is among the responses to a_{-i}.
std::vector<double> response_values(const StageEnv& env, const std::vector<unsigned>& masks);

SeparationResult singleton_fragility_check(const StageEnv& env);

void write_verdict_json(std::ostream& os, const StabilityVerdict& v);
void write_separation_json(std::ostream& os, const SeparationResult& r, const StageEnv& env);

}  // namespace zeitgeist

#endif  // ZEITGEIST_STABILITY_HPP_
