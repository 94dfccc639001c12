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

// Fixture table behind `zeitgeist reproduce`.

#ifndef ZEITGEIST_TOOLS_REPRODUCE_HPP_
#define ZEITGEIST_TOOLS_REPRODUCE_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace zeitgeist::tools {

struct Check {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct Row {
  std::string fixture;
  std::string source;  // closed-form, solver, tree, or simulation
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const;
};

struct ReproduceOptions {
  std::optional<std::string> only;
  // Replaces the built-in three-strategy example.
  std::optional<std::string> example1_env;
  unsigned long long seed = 20260101;
};

const std::vector<std::string>& fixture_names();
std::vector<Row> reproduce(const ReproduceOptions& opt);

void write_rows_text(std::ostream& os, const std::vector<Row>& rows);
void write_rows_json(std::ostream& os, const std::vector<Row>& rows);

}  // namespace zeitgeist::tools

#endif  // ZEITGEIST_TOOLS_REPRODUCE_HPP_
