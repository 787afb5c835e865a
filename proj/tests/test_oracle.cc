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


#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.h"
#include "imsnn/errors.h"
#include "imsnn/oracle.h"
#include "imsnn/training.h"
#include "json.hpp"

namespace imsnn {
namespace {

const char* kArchitectures[] = {"4-3-2", "5-4-3", "6-5-4-3", "3-4-4-3", "8-6-5",
                                "4-5-5-5-3", "10-8-4-3", "5-10-6"};

TEST_CASE("engine matches the direct-sum oracle on random instances in every mode") {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::string arch = kArchitectures[seed % 8];
    const int steps = 8 + static_cast<int>(seed % 13);
    for (Variant variant : {Variant::kImsnn, Variant::kSnn}) {
      auto inst = testing::MakeInstance(arch, variant, steps, seed);
      for (SuppressionMode mode :
           {SuppressionMode::kImsnn, SuppressionMode::kImsnnC, SuppressionMode::kNone}) {
        BackwardConfig cfg;
        cfg.mode = mode;
        const auto fast = Backward(inst.net, inst.forward, inst.output_grad, {}, cfg);
        const auto slow = DirectSumBackward(inst.net, inst.forward, inst.output_grad, {}, cfg);
        const double diff = testing::MaxAbsDiff(fast, slow);
        worst = std::max(worst, diff);
        CAPTURE(seed);
        CAPTURE(arch);
        CHECK(diff <= 1e-12);
        CHECK(fast.spiking_sites == slow.spiking_sites);
        CHECK(fast.suppressed_sites == slow.suppressed_sites);
      }
    }
  }
  MESSAGE("largest engine/oracle difference: " << worst);
}

TEST_CASE("engine matches the oracle through convolutional banks") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    for (const char* arch : {"64-2c3-3", "64-2c3-2c3-3"}) {
      auto inst = testing::MakeInstance(arch, Variant::kImsnn, 12, seed, 0.5);
      for (SuppressionMode mode :
           {SuppressionMode::kImsnn, SuppressionMode::kImsnnC, SuppressionMode::kNone}) {
        BackwardConfig cfg;
        cfg.mode = mode;
        const auto fast = Backward(inst.net, inst.forward, inst.output_grad, {}, cfg);
        const auto slow = DirectSumBackward(inst.net, inst.forward, inst.output_grad, {}, cfg);
        CAPTURE(arch);
        CHECK(testing::MaxAbsDiff(fast, slow) <= 1e-12);
        CHECK(fast.suppressed_sites == slow.suppressed_sites);
      }
    }
  }
}

TEST_CASE("oracle with a zero seed returns zeros") {
  auto inst = testing::MakeInstance("5-4-3", Variant::kImsnn, 12, 3);
  const std::vector<double> zero(3, 0.0);
  const auto res = DirectSumBackward(inst.net, inst.forward, zero, {}, {});
  for (const auto& g : res.height_grads) {
    for (double x : g) CHECK(x == 0.0);
  }
  for (const auto& e : res.epsilon) {
    for (double x : e) CHECK(x == 0.0);
  }
}

TEST_CASE("oracle refuses instances past its size guard") {
  auto big = testing::MakeInstance("4-3-2", Variant::kImsnn, 30, 1);
  try {
    DirectSumBackward(big.net, big.forward, big.output_grad, {}, {});
    FAIL("expected a guard error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kGuard);
  }
  auto wide = testing::MakeInstance("4-130-2", Variant::kImsnn, 5, 1);
  CHECK_THROWS_AS(DirectSumBackward(wide.net, wide.forward, wide.output_grad, {}, {}), Error);
}

// Hidden neurons fire every `period` steps with the ISI equal to `period`,
// and the output bank means are set to that ISI.
struct PeriodicCase {
  Network gauss;
  Network fixed;
  SpikeRaster input;
  int period = 5;
};

PeriodicCase MakePeriodic(std::uint64_t seed) {
  PeriodicCase pc;
  const int steps = 24;
  pc.input = SpikeRaster(steps, 3);
  for (int t = pc.period - 2; t < steps; t += pc.period) {
    for (int i = 0; i < 3; ++i) pc.input.set(t, i, true);
  }
  pc.gauss = BuildNetwork("3-3-2", Variant::kImsnn);
  pc.fixed = BuildNetwork("3-3-2", Variant::kSnn);
  // Diagonal drive strong enough to fire the hidden neuron on every input.
  for (int i = 0; i < 3; ++i) {
    pc.gauss.banks[0].heights()[i * 3 + i] = 3.0;
    pc.fixed.banks[0].heights()[i * 3 + i] = 3.0;
  }
  for (int s = 0; s < 9; ++s) pc.gauss.banks[0].SetShape(s, pc.period, 20.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> h(0.2, 0.3);
  for (int k = 0; k < 6; ++k) {
    const double w = h(rng);
    pc.gauss.banks[1].heights()[k] = w;
    pc.fixed.banks[1].heights()[k] = w;
    pc.gauss.banks[1].SetShape(k, pc.period, 1.5);
  }
  return pc;
}

TEST_CASE("no-suppression mode at realized ISIs reproduces the fixed-weight backward") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PeriodicCase pc = MakePeriodic(seed);
    const auto fg = ForwardPass(pc.gauss, pc.input);
    const auto ff = ForwardPass(pc.fixed, pc.input);
    REQUIRE(fg.layers[1].spikes == ff.layers[1].spikes);
    REQUIRE(fg.layers[1].spikes.Count() > 0);
    const auto& hidden = fg.layers[1];
    for (int t = 0; t < hidden.steps(); ++t) {
      for (int j = 0; j < 3; ++j) {
        if (hidden.spikes.at(t, j)) REQUIRE(hidden.isi(t, j) == pc.period);
      }
    }
    CHECK(fg.layers[2].potentials == ff.layers[2].potentials);

    const std::vector<double> seed_grad = {0.7, -1.3};
    BackwardConfig none;
    none.mode = SuppressionMode::kNone;
    const auto g = Backward(pc.gauss, fg, seed_grad, {}, none);
    const auto f = Backward(pc.fixed, ff, seed_grad, {}, none);
    CHECK(g.height_grads[1] == f.height_grads[1]);
    for (int t = 0; t < hidden.steps(); ++t) {
      for (int j = 0; j < 3; ++j) {
        if (!hidden.spikes.at(t, j)) continue;
        CHECK(g.epsilon[1][t * 3 + j] == doctest::Approx(f.epsilon[1][t * 3 + j]).epsilon(1e-15));
      }
    }
    const auto slow = DirectSumBackward(pc.fixed, ff, seed_grad, {}, none);
    CHECK(testing::MaxAbsDiff(f, slow) <= 1e-12);
  }
}

TEST_CASE("very wide Gaussians converge to the fixed-weight backward") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = testing::MakeInstance("6-5-4-3", Variant::kImsnn, 16, seed);
    Network fixed = inst.net;
    fixed.variant = Variant::kSnn;
    for (auto& bank : inst.net.banks) {
      for (int s = 0; s < static_cast<int>(bank.means().size()); ++s) bank.SetShape(s, 5.0, 1e7);
    }
    const auto fg = ForwardPass(inst.net, inst.input);
    const auto ff = ForwardPass(fixed, inst.input);
    REQUIRE(fg.layers[1].spikes == ff.layers[1].spikes);
    BackwardConfig none;
    none.mode = SuppressionMode::kNone;
    const auto g = Backward(inst.net, fg, inst.output_grad, {}, none);
    const auto f = Backward(fixed, ff, inst.output_grad, {}, none);
    for (std::size_t b = 0; b < g.height_grads.size(); ++b) {
      CHECK(testing::MaxAbsDiff(g.height_grads[b], f.height_grads[b]) <= 1e-9);
    }
  }
}

TEST_CASE("finite-difference check on random 10-5-3 networks") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    InitConfig init;
    init.height_std = 0.5;
    Network net = InitNetwork("10-5-3", Variant::kImsnn, seed, init);
    for (double& h : net.banks[1].heights()) h = std::abs(h);
    std::mt19937_64 rng(seed + 1000);
    const SpikeRaster input = testing::RandomRaster(rng, 20, 10, 0.4);
    const auto report = FdCheckLastLayer(net, input, static_cast<int>(seed % 3), {}, {});
    CAPTURE(seed);
    CHECK(report.passed);
    CHECK(report.valid_count + report.invalid_count == 15);
    CHECK(report.max_rel_error < 1e-6);
  }
}

TEST_CASE("finite-difference check reports zero for a silent presynaptic neuron") {
  Network net = InitNetwork("4-3", Variant::kImsnn, 2);
  for (double& h : net.banks[0].heights()) h = std::abs(h) + 0.1;
  SpikeRaster input(20, 4);
  for (int t = 0; t < 19; t += 2) {
    input.set(t, 1, true);
    input.set(t, 2, true);
  }
  const auto report = FdCheckLastLayer(net, input, 1, {}, {});
  CHECK(report.passed);
  for (const auto& e : report.entries) {
    if (e.index / 3 == 0 || e.index / 3 == 3) {
      CHECK(e.analytic == 0.0);
      CHECK(e.numeric == 0.0);
    }
  }
}

TEST_CASE("a coarse step is flagged as truncation-dominated") {
  InitConfig init;
  init.height_std = 0.5;
  Network net = InitNetwork("10-5-3", Variant::kImsnn, 1, init);
  for (double& h : net.banks[1].heights()) h = std::abs(h);
  std::mt19937_64 rng(4);
  const SpikeRaster input = testing::RandomRaster(rng, 20, 10, 0.4);
  GradCheckOptions opts;
  opts.step = 1e-2;
  const auto report = FdCheckLastLayer(net, input, 0, {}, {}, opts);
  CHECK(report.regime == "truncation-dominated");
  CHECK_FALSE(report.passed);
  opts.step = 1e-9;
  CHECK(FdCheckLastLayer(net, input, 0, {}, {}, opts).regime == "roundoff-dominated");

  const auto doc = nlohmann::json::parse(GradCheckReportToJson(report));
  CHECK(doc.at("regime") == "truncation-dominated");
  CHECK(doc.at("entries").size() == 15);
  CHECK(doc.at("tolerance") == 1e-6);
}

TEST_CASE("raster CSV has one row per cell") {
  testing::TempDir dir("csv");
  const DemoResult d = DemoSingleNeuron();
  WriteRasterCsv(dir.path() / "r.csv", d.matched);
  std::ifstream in(dir.path() / "r.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "timestep,neuron,spike");
  int rows = 0, spikes = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.back() == '1') ++spikes;
  }
  CHECK(rows == 100);
  CHECK(spikes == 4);
}

}  // namespace
}  // namespace imsnn
