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

#include "zeitgeist/lp.hpp"

#include <cmath>

namespace zeitgeist {

namespace {

// Tableau with basic variables B (one per row) and nonbasic N (one per
// column). Column n is the phase-one artificial variable; column n + 1 is
// the right-hand side. Row m is the objective, row m + 1 the phase-one one.
class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
          const std::vector<double>& c, double eps)
      : m_(b.size()), n_(c.size()), eps_(eps), basic_(m_), nonbasic_(n_ + 1),
        d_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (Index i = 0; i < m_; ++i) {
      for (Index j = 0; j < n_; ++j) d_[i][j] = a[i][j];
      basic_[i] = static_cast<long>(n_ + i);
      d_[i][n_] = -1.0;
      d_[i][n_ + 1] = b[i];
    }
    for (Index j = 0; j < n_; ++j) {
      nonbasic_[j] = static_cast<long>(j);
      d_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;
    d_[m_ + 1][n_] = 1.0;
  }

  LpResult solve() {
    LpResult out;
    Index r = 0;
    for (Index i = 1; i < m_; ++i) {
      if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
    }
    if (m_ > 0 && d_[r][n_ + 1] < -eps_) {
      pivot(r, n_);
      if (!simplex(2) || d_[m_ + 1][n_ + 1] < -eps_) {
        out.status = LpResult::Status::kInfeasible;
        return out;
      }
      // Drive the artificial variable out of the basis if it stayed there.
      for (Index i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        Index s = n_ + 1;
        for (Index j = 0; j <= n_; ++j) {
          if (std::abs(d_[i][j]) > eps_ && (s == n_ + 1 || nonbasic_[j] < nonbasic_[s])) s = j;
        }
        if (s != n_ + 1) pivot(i, s);
      }
    }
    const bool bounded = simplex(1);
    out.x.assign(n_, 0.0);
    for (Index i = 0; i < m_; ++i) {
      if (basic_[i] >= 0 && static_cast<Index>(basic_[i]) < n_) out.x[basic_[i]] = d_[i][n_ + 1];
    }
    out.status = bounded ? LpResult::Status::kOptimal : LpResult::Status::kUnbounded;
    out.value = d_[m_][n_ + 1];
    return out;
  }

 private:
  void pivot(Index r, Index s) {
    const double inv = 1.0 / d_[r][s];
    for (Index i = 0; i < m_ + 2; ++i) {
      if (i == r || std::abs(d_[i][s]) <= 0.0) continue;
      const double f = d_[i][s] * inv;
      for (Index j = 0; j < n_ + 2; ++j) {
        if (j != s) d_[i][j] -= d_[r][j] * f;
      }
      d_[i][s] = -f;
    }
    for (Index j = 0; j < n_ + 2; ++j) {
      if (j != s) d_[r][j] *= inv;
    }
    d_[r][s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  // Bland's rule: lowest-labelled improving column, then lowest-labelled
  // row among minimum ratios.
  bool simplex(int phase) {
    const Index x = phase == 1 ? m_ : m_ + 1;
    for (;;) {
      Index s = n_ + 1;
      for (Index j = 0; j <= n_; ++j) {
        if (phase == 1 && nonbasic_[j] == -1) continue;
        if (d_[x][j] < -eps_ && (s == n_ + 1 || nonbasic_[j] < nonbasic_[s])) s = j;
      }
      if (s == n_ + 1) return true;
      Index r = m_;
      for (Index i = 0; i < m_; ++i) {
        if (d_[i][s] <= eps_) continue;
        if (r == m_) {
          r = i;
          continue;
        }
        const double lhs = d_[i][n_ + 1] / d_[i][s];
        const double rhs = d_[r][n_ + 1] / d_[r][s];
        if (lhs < rhs - eps_ || (lhs <= rhs + eps_ && basic_[i] < basic_[r])) r = i;
      }
      if (r == m_) return false;
      pivot(r, s);
    }
  }

  Index m_, n_;
  double eps_;
  std::vector<long> basic_, nonbasic_;
  std::vector<std::vector<double>> d_;
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                  const std::vector<double>& c, double eps) {
  return Tableau(a, b, c, eps).solve();
}

}  // namespace zeitgeist
