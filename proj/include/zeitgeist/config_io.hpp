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

// JSON configuration files for environments, models and simulations.
//
// Errors carry the file name and the line of the offending value, e.g.
// "env.json:14: row does not sum to one (at /situations/0/kernel/rows/2/1)".

#ifndef ZEITGEIST_CONFIG_IO_HPP_
#define ZEITGEIST_CONFIG_IO_HPP_

#include <map>
#include <memory>
#include <string>

#include "zeitgeist/learning_sim.hpp"

namespace zeitgeist {

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

// Shares normal banks and profile classes across every kernel read through
// the same context, so large families load without duplicate rows.
class ConfigContext {
 public:
  std::shared_ptr<NormalBank> bank(const Binning& b);
  std::shared_ptr<const ProfileClasses> level_classes(const std::vector<double>& levels);
  std::shared_ptr<const ProfileClasses> distinct_classes(Index n);

 private:
  std::vector<std::shared_ptr<NormalBank>> banks_;
  std::map<std::vector<double>, std::shared_ptr<const ProfileClasses>> levels_;
  std::map<Index, std::shared_ptr<const ProfileClasses>> distinct_;
};

// `source` names the text in error messages.
StageEnv parse_env(const std::string& text, const std::string& source, ConfigContext& ctx);
Model parse_model(const std::string& text, const std::string& source, const StageEnv& env,
                  ConfigContext& ctx);
SimConfig parse_sim_config(const std::string& text, const std::string& source);

StageEnv load_env(const std::string& path, ConfigContext& ctx);
Model load_model(const std::string& path, const StageEnv& env, ConfigContext& ctx);
SimConfig load_sim_config(const std::string& path);

std::string env_to_json(const StageEnv& env);
std::string model_to_json(const Model& model, const StageEnv& env);
std::string sim_config_to_json(const SimConfig& cfg);

// Reads a whole file; throws ConfigError when it cannot.
std::string read_file(const std::string& path);

// 1-based line of the value at a JSON pointer within `text`, or 0.
Index line_of_pointer(const std::string& text, const std::string& pointer);

}  // namespace zeitgeist

#endif  // ZEITGEIST_CONFIG_IO_HPP_
