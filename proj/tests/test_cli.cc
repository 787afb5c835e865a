// Copyright 2026 The IMSNN Authors
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


#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.h"
#include "imsnn/cli.h"
#include "imsnn/config.h"
#include "imsnn/dataio.h"
#include "imsnn/errors.h"
#include "imsnn/serialize.h"
#include "json.hpp"

namespace imsnn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::TempDir;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> Lines(const fs::path& p) {
  std::vector<std::string> lines;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

// A synthetic "mnist" seeded into a private cache, with the sources file
// exported through IMSNN_DATASETS_CONFIG for the lifetime of the fixture.
struct CliFixture {
  TempDir dir{"cli"};
  fs::path cache = dir.path() / "cache";
  fs::path sources = dir.path() / "datasets.json";
  std::string saved_env;
  bool had_env = false;

  CliFixture() {
    std::map<std::string, std::vector<std::uint8_t>> raw;
    raw["train-images"] = SerializeIdx(testing::SyntheticImages(24, 28, 28, 11));
    raw["train-labels"] = SerializeIdx(testing::SyntheticLabels(24));
    raw["test-images"] = SerializeIdx(testing::SyntheticImages(10, 28, 28, 12));
    raw["test-labels"] = SerializeIdx(testing::SyntheticLabels(10));
    json files;
    for (const auto& [key, bytes] : raw) {
      files[key] = {{"remote", key + ".gz"}, {"sha256", Sha256Hex(bytes)}};
      const auto split = ParseSplit(key.substr(0, key.find('-')));
      const auto path = CachePath(cache, "mnist", split, key.substr(key.find('-') + 1));
      fs::create_directories(path.parent_path());
      const auto gz = Gzip(bytes);
      std::ofstream(path, std::ios::binary)
          .write(reinterpret_cast<const char*>(gz.data()), static_cast<std::streamsize>(gz.size()));
    }
    json doc;
    doc["mnist"] = {{"mirrors", {"http://127.0.0.1:9/"}}, {"files", files}};
    std::ofstream(sources) << doc.dump();
    if (const char* v = std::getenv("IMSNN_DATASETS_CONFIG")) {
      had_env = true;
      saved_env = v;
    }
    setenv("IMSNN_DATASETS_CONFIG", sources.c_str(), 1);
  }

  ~CliFixture() {
    if (had_env) {
      setenv("IMSNN_DATASETS_CONFIG", saved_env.c_str(), 1);
    } else {
      unsetenv("IMSNN_DATASETS_CONFIG");
    }
  }

  fs::path WriteConfig(const std::string& name, json extra = json::object()) const {
    json cfg = {{"dataset", "mnist"},
                {"architecture", "784-16-10"},
                {"variant", "imsnn"},
                {"epochs", 2},
                {"batch_size", 8},
                {"seed", 4},
                {"lr", 1e-3},
                {"cache_dir", cache.string()},
                {"offline", true}};
    cfg.update(extra);
    const fs::path p = dir.path() / name;
    std::ofstream(p) << cfg.dump(1);
    return p;
  }
};

int Run(const std::vector<std::string>& args, std::string* out = nullptr,
        std::string* err = nullptr) {
  std::ostringstream o, e;
  const int code = RunSubcommand(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

TEST_CASE("metrics csv header lists one kappa column per hidden layer") {
  CHECK(MetricsCsvHeader(1) ==
        "epoch,split,accuracy,kappa_n_layer1,kappa_n_network,loss,suppressed_fraction,samples,"
        "degenerate");
  MetricsRecord r;
  r.epoch = 2;
  r.split = "test";
  r.accuracy = 50.0;
  r.layer_spikes = {0.25, 0.5};
  r.network_spikes = 0.75;
  r.samples = 4;
  CHECK(MetricsCsvRow(r) == "2,test,50,0.25,0.5,0.75,0,0,4,0");
}

TEST_CASE("train writes metrics, summary and model") {
  CliFixture fx;
  const fs::path out = fx.dir.path() / "run";
  std::string stdout_text, stderr_text;
  const int code = Run({"train", "--config", fx.WriteConfig("cfg.json").string(), "--out",
                        out.string()},
                       &stdout_text, &stderr_text);
  INFO(stderr_text);
  REQUIRE(code == 0);
  CHECK(stdout_text.find("epoch 2 test") != std::string::npos);

  const auto lines = Lines(out / "metrics.csv");
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == MetricsCsvHeader(1));
  CHECK(lines[1].rfind("1,train,", 0) == 0);
  CHECK(lines[2].rfind("1,test,", 0) == 0);
  CHECK(lines[4].rfind("2,test,", 0) == 0);

  const json summary = json::parse(Slurp(out / "summary.json"));
  CHECK(summary["kind"] == "imsnn-summary");
  CHECK(summary["version"] == VersionString());
  CHECK(summary["records"].size() == 4);
  CHECK(summary["final_test"]["epoch"] == 2);
  CHECK(summary["final_test"]["samples"] == 10);

  const RunConfig replay = LoadRunConfig(out / "summary.json");
  CHECK(replay.architecture == "784-16-10");
  CHECK(replay.seed == 4);
  CHECK(replay.output_dir == out.string());
  CHECK(RunConfigToJson(replay) == summary["config"]);

  const Network model = LoadModel(out / "model.json");
  CHECK(model.architecture == "784-16-10");
  CHECK(ModelToJson(model) == Slurp(out / "model.json"));
}

TEST_CASE("same-seed runs produce identical metrics") {
  CliFixture fx;
  const fs::path cfg = fx.WriteConfig("cfg.json", {{"epochs", 1}});
  REQUIRE(Run({"train", "--config", cfg.string(), "--out", (fx.dir.path() / "a").string()}) == 0);
  REQUIRE(Run({"train", "--config", cfg.string(), "--threads", "3", "--out",
               (fx.dir.path() / "b").string()}) == 0);
  CHECK(Slurp(fx.dir.path() / "a" / "metrics.csv") == Slurp(fx.dir.path() / "b" / "metrics.csv"));
  CHECK(Slurp(fx.dir.path() / "a" / "model.json") == Slurp(fx.dir.path() / "b" / "model.json"));
}

TEST_CASE("a second run appends to metrics.csv without a new header") {
  CliFixture fx;
  const fs::path cfg = fx.WriteConfig("cfg.json", {{"epochs", 1}});
  const fs::path out = fx.dir.path() / "run";
  REQUIRE(Run({"train", "--config", cfg.string(), "--out", out.string()}) == 0);
  REQUIRE(Run({"train", "--config", cfg.string(), "--out", out.string()}) == 0);
  const auto lines = Lines(out / "metrics.csv");
  CHECK(lines.size() == 5);
  CHECK(lines[3] == lines[1]);
}

TEST_CASE("eval reproduces the final test record of a run") {
  CliFixture fx;
  const fs::path cfg = fx.WriteConfig("cfg.json", {{"epochs", 1}});
  const fs::path out = fx.dir.path() / "run";
  REQUIRE(Run({"train", "--config", cfg.string(), "--out", out.string()}) == 0);
  std::string text;
  REQUIRE(Run({"eval", "--config", cfg.string(), "--model", (out / "model.json").string(), "--out",
               (fx.dir.path() / "eval").string()},
              &text) == 0);
  const json eval = json::parse(Slurp(fx.dir.path() / "eval" / "eval.json"));
  const json summary = json::parse(Slurp(out / "summary.json"));
  CHECK(eval["accuracy"] == summary["final_test"]["accuracy"]);
  CHECK(eval["network_kappa_n"] == summary["final_test"]["network_kappa_n"]);
  CHECK(eval["samples"] == 10);
}

TEST_CASE("config errors, cache misses and usage errors map to exit codes") {
  CliFixture fx;
  std::string err;
  CHECK(Run({"train", "--config", fx.WriteConfig("bad.json", {{"learning_rate", 1}}).string()},
            nullptr, &err) == ExitCodeFor(ErrorKind::kConfig));
  CHECK(err.find("learning_rate") != std::string::npos);
  CHECK(ExitCodeFor(ErrorKind::kConfig) == 2);

  const fs::path empty_cache = fx.dir.path() / "empty";
  CHECK(Run({"train", "--config",
             fx.WriteConfig("miss.json", {{"cache_dir", empty_cache.string()}}).string()},
            nullptr, &err) == ExitCodeFor(ErrorKind::kCacheMiss));
  CHECK(ExitCodeFor(ErrorKind::kCacheMiss) == 3);

  CHECK(Run({"frobnicate"}) == 2);
  CHECK(Run({}) == 2);
  CHECK(Run({"train", "--epochs", "many"}) == 2);
  CHECK(Run({"train", "--config", (fx.dir.path() / "absent.json").string()}) == 2);
  CHECK(Run({"--version"}) == 0);
}

TEST_CASE("demo writes four raster files and passes") {
  TempDir dir("demo");
  std::string text;
  CHECK(Run({"demo", "--out", dir.path().string()}, &text) == 0);
  CHECK(text.find("verdict: PASS") != std::string::npos);
  for (const char* name : {"input.csv", "conventional.csv", "gaussian_mu10.csv", "gaussian_mu15.csv"}) {
    const auto lines = Lines(dir.path() / name);
    REQUIRE(lines.size() == 101);
    CHECK(lines[0] == "timestep,neuron,spike");
    CHECK(lines[1] == "1,0,0");
  }
  CHECK(Lines(dir.path() / "input.csv")[10] == "10,0,1");
}

TEST_CASE("gradcheck passes at the default step and flags a coarse step") {
  TempDir dir("gradcheck");
  std::string text;
  CHECK(Run({"gradcheck", "--seed", "5", "--out", dir.path().string()}, &text) == 0);
  const json report = json::parse(Slurp(dir.path() / "gradcheck.json"));
  CHECK(report["passed"] == true);
  CHECK(report["regime"] == "ok");
  CHECK(Run({"gradcheck", "--seed", "5", "--step", "1e-3"}, &text) == 1);
  CHECK(text.find("truncation-dominated") != std::string::npos);
}

}  // namespace
}  // namespace imsnn
