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

// Dense two-phase simplex with Bland's rule. Small problems only; the
// pivoting order is fixed, so the returned vertex is deterministic.

#ifndef ZEITGEIST_LP_HPP_
#define ZEITGEIST_LP_HPP_

#include <vector>

#include "zeitgeist/common.hpp"

namespace zeitgeist {

struct LpResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kInfeasible;
  double value = 0.0;
  std::vector<double> x;
};

// maximize c·x  subject to  A x <= b,  x >= 0.
LpResult solve_lp(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                  const std::vector<double>& c, double eps = 1e-12);

}  // namespace zeitgeist

#endif  // ZEITGEIST_LP_HPP_
