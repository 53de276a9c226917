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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "grafn/graphdata.hpp"
#include "testing.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(GRAFN_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Workspace {
  fs::path dir = grafn::testing::scratch_dir("cli");
  fs::path data = dir / "toy";
  Workspace() {
    grafn::save_dataset(grafn::random_dataset(40, 8, 3, 0.15, 4), data);
    REQUIRE(run("split -d " + data.string() + " --rate 0.3 -n 2 --seed 5 -o " + (dir / "splits").string())
                .code == 0);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string split(int i) const {
    return (dir / "splits" / ("split_00" + std::to_string(i) + ".json")).string();
  }
  std::string small() const {
    return "-d " + data.string() + " --set hidden_dim=8 --set embed_dim=6 --epochs 5";
  }
};

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("split --rate 0.1").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("missing data exits with 3") {
  const Run r = run("split -d /nonexistent/dataset --rate 0.1 -o /tmp/unused");
  CHECK(r.code == 3);
  CHECK(r.out.find("grafn:") != std::string::npos);
}

TEST_CASE("train, eval, simsearch and degree-report") {
  Workspace w;
  const fs::path out = w.dir / "run1";
  Run r = run("train " + w.small() + " --split " + w.split(0) + " -o " + out.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("best_val=") != std::string::npos);
  CHECK(fs::exists(out / "model.ckpt"));
  const std::string result = slurp(out / "result.json");
  CHECK(result.find("loss_history") != std::string::npos);

  // same inputs, same bytes
  REQUIRE(run("train " + w.small() + " --split " + w.split(0) + " -o " + (w.dir / "run2").string())
              .code == 0);
  CHECK(slurp(w.dir / "run2" / "result.json") == result);

  const std::string ckpt = (out / "model.ckpt").string();
  r = run("eval -d " + w.data.string() + " --checkpoint " + ckpt + " --split " + w.split(0));
  CHECK(r.code == 0);
  CHECK(r.out.find("test=") != std::string::npos);
  r = run("simsearch -d " + w.data.string() + " --checkpoint " + ckpt + " -k 1,3");
  CHECK(r.code == 0);
  CHECK(r.out.find("sim@3=") != std::string::npos);
  r = run("degree-report -d " + w.data.string() + " --checkpoint " + ckpt + " --split " +
          w.split(0) + " --boundaries 2,4 -o " + out.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "degree.json"));
  r = run("degree-report -d " + w.data.string() + " --checkpoint " + ckpt + " --split " +
          w.split(0) + " --boundaries 4,2");
  CHECK(r.code == 2);
  r = run("eval -d " + w.data.string() + " --checkpoint " + w.split(0) + " --split " + w.split(0));
  CHECK(r.code == 3);
}

TEST_CASE("config errors exit with 2") {
  Workspace w;
  const fs::path conf = w.dir / "bad.conf";
  {
    std::ofstream out(conf);
    out << "learning_rate = 0.01\nno_such_key = 1\n";
  }
  Run r = run("train " + w.small() + " -c " + conf.string() + " --split " + w.split(0) + " -o " +
              (w.dir / "x").string());
  CHECK(r.code == 2);
  CHECK(r.out.find("no_such_key") != std::string::npos);
  r = run("train " + w.small() + " --set tau=-1 --split " + w.split(0) + " -o " +
          (w.dir / "x").string());
  CHECK(r.code == 2);
}

TEST_CASE("divergence exits with 4 and keeps the partial result") {
  Workspace w;
  const fs::path out = w.dir / "div";
  const Run r = run("train -d " + w.data.string() + " --set hidden_dim=8 --epochs 50" +
                    " --set learning_rate=1e200 --split " +
                    w.split(0) + " -o " + out.string());
  CHECK(r.code == 4);
  CHECK(fs::exists(out / "result.json"));
}

TEST_CASE("bench output is identical across runs and job counts") {
  Workspace w;
  const std::string base = "bench " + w.small() + " --rate 0.3 -n 3 --seed 1 -o ";
  REQUIRE(run(base + (w.dir / "b1").string()).code == 0);
  REQUIRE(run(base + (w.dir / "b2").string() + " -j 3").code == 0);
  CHECK(slurp(w.dir / "b1" / "bench.csv") == slurp(w.dir / "b2" / "bench.csv"));
  CHECK(slurp(w.dir / "b1" / "bench.json") == slurp(w.dir / "b2" / "bench.json"));
}

TEST_CASE("gradcheck subcommand") {
  Run r = run("gradcheck --size 16 --seed 2");
  CHECK(r.code == 0);
  CHECK(r.out.find("max_rel_error=") != std::string::npos);
  r = run("gradcheck --size 16 --seed 2 --set nu=0");
  CHECK(r.code == 0);
}

TEST_CASE("convert refuses to overwrite without --force") {
  Workspace w;
  const fs::path content = w.dir / "t.content", cites = w.dir / "t.cites";
  {
    std::ofstream(content) << "a 1 0 x\nb 0 1 y\n";
    std::ofstream(cites) << "a b\n";
  }
  const std::string args = "convert --content " + content.string() + " --cites " + cites.string() +
                           " -o " + w.data.string();
  CHECK(run(args).code == 2);
  const Run r = run(args + " --force");
  CHECK(r.code == 0);
  CHECK(r.out.find("nodes=2") != std::string::npos);
}
