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

// Small environment builders shared by the unit suites.

#ifndef ZEITGEIST_TESTS_FIXTURES_HPP_
#define ZEITGEIST_TESTS_FIXTURES_HPP_

#include <memory>
#include <string>
#include <vector>

#include "zeitgeist/game_core.hpp"

namespace fixtures {

using zeitgeist::Index;

// Y = {g, b} with u(g) = 1, u(b) = 0; success[s][own][opp] is P(g).
inline zeitgeist::StageEnv success_env(const std::vector<std::vector<std::vector<double>>>& success,
                                       zeitgeist::Monitoring mon) {
  const Index n = success.at(0).size();
  std::vector<std::string> strategies, situations;
  for (Index i = 0; i < n; ++i) strategies.push_back("a" + std::to_string(i + 1));
  std::vector<zeitgeist::KernelPtr> kernels;
  for (Index s = 0; s < success.size(); ++s) {
    situations.push_back("G" + std::to_string(s));
    std::vector<std::vector<std::vector<double>>> rows(n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) rows[i].push_back({success[s][i][j], 1.0 - success[s][i][j]});
    kernels.push_back(std::make_shared<zeitgeist::TableKernel>(n, 2, rows));
  }
  return zeitgeist::StageEnv(strategies, {"g", "b"}, situations, kernels, {1.0, 0.0}, std::move(mon));
}

inline zeitgeist::StageEnv success_env(const std::vector<std::vector<std::vector<double>>>& success) {
  std::vector<std::string> strategies;
  for (Index i = 0; i < success.at(0).size(); ++i) strategies.push_back("a" + std::to_string(i + 1));
  return success_env(success, zeitgeist::Monitoring::perfect(strategies));
}

// Deterministic consequence "win" iff the two strategies differ.
inline zeitgeist::StageEnv anti_coordination_env() {
  return success_env({{{0.0, 1.0}, {1.0, 0.0}}});
}

}  // namespace fixtures

#endif  // ZEITGEIST_TESTS_FIXTURES_HPP_
