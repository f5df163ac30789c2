// Copyright 2026 The scora Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef SCORA_CONFIG_FILE_HPP_
#define SCORA_CONFIG_FILE_HPP_

// Flat "key = value" experiment files in TOML syntax, e.g.
//
//   A = 100
//   k_c = "uniform"
//   budgets = [100, 1000, 10000]
//
// Keys are those of SettingKeys(); tables are not allowed.

#include <fstream>
#include <istream>
#include <string>

#include "CLI11.hpp"
#include "scora/error.hpp"
#include "scora/experiments.hpp"

namespace scora {

inline void ApplyConfigStream(ExperimentConfig& config, std::istream& in) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  for (const auto& item : items) {
    if (!item.parents.empty()) {
      throw InputError("config: tables are not supported ('" + item.fullname() + "')");
    }
    ApplySetting(config, item.name, item.inputs);
  }
}

inline void ApplyConfigFile(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  ApplyConfigStream(config, in);
}

}  // namespace scora

#endif  // SCORA_CONFIG_FILE_HPP_
