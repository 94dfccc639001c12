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

#include "zeitgeist/common.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zeitgeist {

Shares Shares::make(double pa, double pb) {
  if (!(pa >= 0.0 && pa <= 1.0 && pb >= 0.0 && pb <= 1.0) ||
      std::abs(pa + pb - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "shares must lie in [0,1] and sum to 1, got (" << pa << ", " << pb << ")";
    throw InputError(os.str());
  }
  return Shares{pa, pb};
}

std::vector<Index> argmax_set(std::span<const double> values, double tol) {
  std::vector<Index> out;
  if (values.empty()) return out;
  const double best = *std::max_element(values.begin(), values.end());
  for (Index i = 0; i < values.size(); ++i) {
    if (values[i] >= best - tol) out.push_back(i);
  }
  return out;
}

void check_probability_row(std::span<const double> row, const std::string& what) {
  if (row.empty()) throw InputError(what + ": empty probability row");
  double sum = 0.0;
  for (double v : row) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InputError(what + ": probability entries must be finite and nonnegative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbTol) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": probabilities sum to " << sum << ", not 1";
    throw InputError(os.str());
  }
}

}  // namespace zeitgeist
