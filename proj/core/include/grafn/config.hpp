// Copyright 2026 The grafn Authors. All Rights Reserved.
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

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "grafn/trainer.hpp"

namespace grafn {

/// One `key = value` line of a config file.
struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Flat key-value grammar: one `key = value` per line, `#` starts a
/// comment, blank lines are ignored. Keys may not repeat.
std::vector<ConfigEntry> parse_key_values(const std::string& text,
                                          const std::string& source = "<config>");
std::vector<ConfigEntry> read_key_values(const std::filesystem::path& file);

/// Applies one key to `cfg`. Unknown keys and malformed values throw
/// Error(kUsage).
void apply_config_entry(TrainConfig& cfg, const std::string& key, const std::string& value);
void apply_config_entries(TrainConfig& cfg, const std::vector<ConfigEntry>& entries);

/// Every key of `cfg` in canonical order, parseable by parse_key_values.
std::string to_config_text(const TrainConfig& cfg);
std::vector<std::pair<std::string, std::string>> config_items(const TrainConfig& cfg);

/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_fingerprint(const TrainConfig& cfg);

/// Names accepted by apply_config_entry.
const std::vector<std::string>& config_keys();

}  // namespace grafn
