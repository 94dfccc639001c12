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

#ifndef ZEITGEIST_COMMON_HPP_
#define ZEITGEIST_COMMON_HPP_

#include <array>
#include <compare>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace zeitgeist {

using Index = std::size_t;

// Ties in any argmax/argmin, and strict fitness comparisons.
inline constexpr double kTieTol = 1e-9;
// Probability rows must sum to one within this.
inline constexpr double kProbTol = 1e-9;
// Two kernels are distinguishable when some entry differs by more than this.
inline constexpr double kIdentTol = 1e-12;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Bad labels, malformed tables, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A builder could not produce an object satisfying its own invariants.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Group { A = 0, B = 1 };

inline Group other(Group g) { return g == Group::A ? Group::B : Group::A; }
inline Index idx(Group g) { return static_cast<Index>(g); }
inline const char* name(Group g) { return g == Group::A ? "A" : "B"; }

struct Shares {
  double a = 1.0;
  double b = 0.0;

  // Throws InputError unless both lie in [0,1] and sum to one within 1e-12.
  static Shares make(double pa, double pb);
  static Shares of_a(double pa) { return make(pa, 1.0 - pa); }
  double of(Group g) const { return g == Group::A ? a : b; }
};

// Strategy played by group g against group g' is play(g, g').
struct Quadruple {
  Index aa = 0, ab = 0, ba = 0, bb = 0;

  Index play(Group g, Group opp) const {
    if (g == Group::A) return opp == Group::A ? aa : ab;
    return opp == Group::A ? ba : bb;
  }
  std::array<Index, 4> as_array() const { return {aa, ab, ba, bb}; }
  auto operator<=>(const Quadruple&) const = default;
};

// Indices within tol of the maximum, ascending.
std::vector<Index> argmax_set(std::span<const double> values,
                              double tol = kTieTol);

// Validates a probability vector; throws InputError naming `what`.
void check_probability_row(std::span<const double> row, const std::string& what);

}  // namespace zeitgeist

#endif  // ZEITGEIST_COMMON_HPP_
