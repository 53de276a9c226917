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

#include <cctype>
#include <fstream>

#include "grafn/config.hpp"
#include "grafn/error.hpp"
#include "testing.hpp"

using namespace grafn;

TEST_CASE("parse key values") {
  const auto entries = parse_key_values(
      "# comment\n"
      "\n"
      "  learning_rate = 0.01   # trailing\n"
      "inference=snn\n");
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].key == "learning_rate");
  CHECK(entries[0].value == "0.01");
  CHECK(entries[0].line == 3);
  CHECK(entries[1].value == "snn");

  CHECK_THROWS_AS(parse_key_values("a = 1\na = 2\n"), Error);
  CHECK_THROWS_AS(parse_key_values("no equals sign\n"), Error);
  CHECK_THROWS_AS(parse_key_values("key =\n"), Error);
  try {
    parse_key_values("x = 1\n\nbad line\n", "f.conf");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUsage);
    CHECK(std::string(e.what()).find("f.conf:3") != std::string::npos);
  }
}

TEST_CASE("applying entries sets fields and rejects bad values") {
  TrainConfig cfg;
  apply_config_entries(cfg, parse_key_values("learning_rate = 0.02\nhidden_dim = 64\n"
                                             "inference = snn\nmask_mode = entry\n"
                                             "support_view = cross\nstop_gradient = false\n"
                                             "nu = 0.75\nweak_edge_drop = 0.1\n"
                                             "center_embeddings = true\n"));
  CHECK(cfg.learning_rate == 0.02);
  CHECK(cfg.hidden_dim == 64);
  CHECK(cfg.inference == InferenceMode::kSnn);
  CHECK(cfg.loss.weak_aug.mask_mode == MaskMode::kEntry);
  CHECK(cfg.loss.strong_aug.mask_mode == MaskMode::kEntry);
  CHECK(cfg.loss.support_view == SupportView::kCross);
  CHECK_FALSE(cfg.loss.stop_gradient);
  CHECK(cfg.loss.nu == 0.75);
  CHECK(cfg.loss.weak_aug.p_edge_drop == 0.1);
  CHECK(cfg.center_embeddings);

  CHECK_THROWS_AS(apply_config_entry(cfg, "bogus", "1"), Error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "hidden_dim", "-3"), Error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "hidden_dim", "2.5"), Error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "tau", "abc"), Error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "inference", "knn"), Error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "stop_gradient", "yes"), Error);
}

TEST_CASE("canonical text round trips and fingerprints are stable") {
  TrainConfig cfg;
  cfg.learning_rate = 0.0123;
  cfg.loss.tau = 0.07;
  cfg.seed = 42;
  const std::string text = to_config_text(cfg);
  TrainConfig back;
  apply_config_entries(back, parse_key_values(text));
  CHECK(to_config_text(back) == text);
  CHECK(config_fingerprint(back) == config_fingerprint(cfg));

  const std::string fp = config_fingerprint(cfg);
  CHECK(fp.size() == 16);
  for (char c : fp) CHECK(std::isxdigit(static_cast<unsigned char>(c)));
  back.loss.lambda1 = 0.5;
  CHECK(config_fingerprint(back) != fp);

  const auto items = config_items(cfg);
  CHECK(items.size() == config_keys().size());
  CHECK(items.front().first == "hidden_dim");
  for (std::size_t i = 0; i < items.size(); ++i) CHECK(items[i].first == config_keys()[i]);
}

TEST_CASE("reading a config file") {
  const auto dir = grafn::testing::scratch_dir("config");
  {
    std::ofstream out(dir / "a.conf");
    out << "max_epochs = 7\n";
  }
  const auto entries = read_key_values(dir / "a.conf");
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].value == "7");
  CHECK_THROWS_AS(read_key_values(dir / "missing.conf"), Error);
  std::filesystem::remove_all(dir);
}
