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

#include "grafn/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "grafn/error.hpp"

namespace grafn {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  fail(ErrorKind::kUsage, "config key '" + key + "': expected " + expected + ", got '" + value + "'");
}

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value, "a real number");
  return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    bad_value(key, value, "a non-negative integer");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  bad_value(key, value, "true or false");
}

std::string real_text(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string bool_text(bool v) { return v ? "true" : "false"; }

struct KeySpec {
  std::string name;
  std::function<void(TrainConfig&, const std::string&)> set;
  std::function<std::string(const TrainConfig&)> get;
};

template <typename Field>
KeySpec real_key(std::string name, Field field) {
  return {name,
          [name, field](TrainConfig& c, const std::string& v) { field(c) = parse_real(name, v); },
          [field](const TrainConfig& c) { return real_text(field(c)); }};
}

template <typename Field>
KeySpec count_key(std::string name, Field field) {
  return {name,
          [name, field](TrainConfig& c, const std::string& v) {
            field(c) = static_cast<std::size_t>(parse_unsigned(name, v));
          },
          [field](const TrainConfig& c) {
            return std::to_string(field(c));
          }};
}

template <typename Field>
KeySpec bool_key(std::string name, Field field) {
  return {name,
          [name, field](TrainConfig& c, const std::string& v) { field(c) = parse_bool(name, v); },
          [field](const TrainConfig& c) { return bool_text(field(c)); }};
}

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = [] {
    std::vector<KeySpec> s;
    s.push_back(count_key("hidden_dim", [](auto& c) -> auto& { return c.hidden_dim; }));
    s.push_back(count_key("embed_dim", [](auto& c) -> auto& { return c.embed_dim; }));
    s.push_back(real_key("learning_rate", [](auto& c) -> auto& { return c.learning_rate; }));
    s.push_back(real_key("weight_decay", [](auto& c) -> auto& { return c.weight_decay; }));
    s.push_back(real_key("dropout", [](auto& c) -> auto& { return c.dropout; }));
    s.push_back(count_key("max_epochs", [](auto& c) -> auto& { return c.max_epochs; }));
    s.push_back({"seed",
                 [](TrainConfig& c, const std::string& v) { c.seed = parse_unsigned("seed", v); },
                 [](const TrainConfig& c) { return std::to_string(c.seed); }});
    s.push_back(bool_key("feature_row_normalize",
                         [](auto& c) -> auto& { return c.feature_row_normalize; }));
    s.push_back(bool_key("center_embeddings",
                         [](auto& c) -> auto& { return c.center_embeddings; }));
    s.push_back({"inference",
                 [](TrainConfig& c, const std::string& v) {
                   if (v == "linear") c.inference = InferenceMode::kLinear;
                   else if (v == "snn") c.inference = InferenceMode::kSnn;
                   else bad_value("inference", v, "linear or snn");
                 },
                 [](const TrainConfig& c) {
                   return std::string(c.inference == InferenceMode::kSnn ? "snn" : "linear");
                 }});
    s.push_back(real_key("tau", [](auto& c) -> auto& { return c.loss.tau; }));
    s.push_back(real_key("nu", [](auto& c) -> auto& { return c.loss.nu; }));
    s.push_back(real_key("lambda1", [](auto& c) -> auto& { return c.loss.lambda1; }));
    s.push_back(real_key("lambda2", [](auto& c) -> auto& { return c.loss.lambda2; }));
    s.push_back(real_key("weak_feature_mask",
                         [](auto& c) -> auto& { return c.loss.weak_aug.p_feature_mask; }));
    s.push_back(real_key("weak_edge_drop",
                         [](auto& c) -> auto& { return c.loss.weak_aug.p_edge_drop; }));
    s.push_back(real_key("strong_feature_mask",
                         [](auto& c) -> auto& { return c.loss.strong_aug.p_feature_mask; }));
    s.push_back(real_key("strong_edge_drop",
                         [](auto& c) -> auto& { return c.loss.strong_aug.p_edge_drop; }));
    s.push_back({"mask_mode",
                 [](TrainConfig& c, const std::string& v) {
                   MaskMode m;
                   if (v == "column") m = MaskMode::kColumn;
                   else if (v == "entry") m = MaskMode::kEntry;
                   else bad_value("mask_mode", v, "column or entry");
                   c.loss.weak_aug.mask_mode = m;
                   c.loss.strong_aug.mask_mode = m;
                 },
                 [](const TrainConfig& c) {
                   return std::string(c.loss.strong_aug.mask_mode == MaskMode::kEntry ? "entry"
                                                                                       : "column");
                 }});
    s.push_back({"support_view",
                 [](TrainConfig& c, const std::string& v) {
                   if (v == "same") c.loss.support_view = SupportView::kSame;
                   else if (v == "cross") c.loss.support_view = SupportView::kCross;
                   else bad_value("support_view", v, "same or cross");
                 },
                 [](const TrainConfig& c) {
                   return std::string(c.loss.support_view == SupportView::kCross ? "cross" : "same");
                 }});
    s.push_back(bool_key("stop_gradient", [](auto& c) -> auto& { return c.loss.stop_gradient; }));
    s.push_back(real_key("norm_eps", [](auto& c) -> auto& { return c.loss.norm_eps; }));
    return s;
  }();
  return specs;
}

}  // namespace

std::vector<ConfigEntry> parse_key_values(const std::string& text, const std::string& source) {
  std::vector<ConfigEntry> out;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(std::string_view(raw).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = source + ":" + std::to_string(line);
    if (eq == std::string::npos) fail(ErrorKind::kUsage, where + ": expected 'key = value'");
    ConfigEntry e{trim(std::string_view(body).substr(0, eq)),
                  trim(std::string_view(body).substr(eq + 1)), line};
    if (e.key.empty() || e.value.empty()) fail(ErrorKind::kUsage, where + ": empty key or value");
    if (!seen.insert(e.key).second) fail(ErrorKind::kUsage, where + ": duplicate key '" + e.key + "'");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ConfigEntry> read_key_values(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(ErrorKind::kUsage, "cannot open config file " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str(), file.string());
}

void apply_config_entry(TrainConfig& cfg, const std::string& key, const std::string& value) {
  for (const KeySpec& spec : key_specs()) {
    if (spec.name == key) {
      spec.set(cfg, value);
      return;
    }
  }
  fail(ErrorKind::kUsage, "unknown config key '" + key + "'");
}

void apply_config_entries(TrainConfig& cfg, const std::vector<ConfigEntry>& entries) {
  for (const ConfigEntry& e : entries) apply_config_entry(cfg, e.key, e.value);
}

std::vector<std::pair<std::string, std::string>> config_items(const TrainConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const KeySpec& spec : key_specs()) out.emplace_back(spec.name, spec.get(cfg));
  return out;
}

std::string to_config_text(const TrainConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : config_items(cfg)) out += k + " = " + v + "\n";
  return out;
}

std::string config_fingerprint(const TrainConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_config_text(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const KeySpec& spec : key_specs()) k.push_back(spec.name);
    return k;
  }();
  return keys;
}

}  // namespace grafn
