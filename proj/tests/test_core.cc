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
#include <vector>

#include "doctest.h"
#include "imsnn/core.h"
#include "imsnn/errors.h"
#include "imsnn/raster.h"

namespace imsnn {
namespace {

TEST_CASE("isi_update examples") {
  CHECK(IsiUpdate(0, false) == 1);
  CHECK(IsiUpdate(3, false) == 4);
  CHECK(IsiUpdate(7, true) == 1);
}

TEST_CASE("isi_update over a spike-free run adds the run length") {
  for (Isi start = 0; start < 20; ++start) {
    for (int k = 0; k < 50; ++k) {
      Isi phi = start;
      for (int i = 0; i < k; ++i) phi = IsiUpdate(phi, false);
      CHECK(phi == start + k);
    }
  }
}

TEST_CASE("synapse_weight examples") {
  CHECK(SynapseWeight({0.6, 10.0, 5.0}, 10) == 0.6);
  CHECK(SynapseWeight({0.6, 10.0, 5.0}, 15) ==
        doctest::Approx(0.36391839582758005416).epsilon(1e-15));
  CHECK(SynapseWeight({0.0, 3.0, 2.0}, 17) == 0.0);
  CHECK(SynapseWeight({0.0, 40.0, 0.5}, 1) == 0.0);
}

TEST_CASE("synapse weight is bounded by the height, with equality only at the mean") {
  for (double height : {0.6, -0.25, 1.5}) {
    for (double mean : {1.0, 7.0, 10.0, 37.0}) {
      for (double width : {0.5, 5.0, 50.0}) {
        const GaussianSynapse syn{height, mean, width};
        for (Isi phi = 1; phi <= 200; ++phi) {
          const double w = SynapseWeight(syn, phi);
          CHECK(std::abs(w) <= std::abs(height));
          CHECK(std::signbit(w) == std::signbit(height));
          if (static_cast<double>(phi) == mean) {
            CHECK(w == height);
          } else {
            CHECK(std::abs(w) < std::abs(height));
          }
        }
      }
    }
  }
}

TEST_CASE("membrane_step examples") {
  auto r = MembraneStep(0.5, 0.99, 0.2, 1.0);
  CHECK(r.potential == doctest::Approx(0.695).epsilon(1e-15));
  CHECK_FALSE(r.spike);

  r = MembraneStep(0.9, 0.99, 0.2, 1.0);
  CHECK(r.spike);
  CHECK(r.potential == 0.0);

  r = MembraneStep(0.0, 0.99, 0.0, 1.0);
  CHECK(r.potential == 0.0);
  CHECK_FALSE(r.spike);
}

TEST_CASE("membrane_step fires at exactly the threshold and resets") {
  const auto r = MembraneStep(0.0, 0.99, 1.0, 1.0);
  CHECK(r.spike);
  CHECK(r.potential == 0.0);
}

TEST_CASE("membrane_step never leaves a potential at or above threshold without a spike") {
  for (double v = -2.0; v <= 2.0; v += 0.05) {
    for (double inflow = -1.0; inflow <= 1.5; inflow += 0.05) {
      const auto r = MembraneStep(v, 0.99, inflow, 1.0);
      if (!r.spike) CHECK(r.potential < 1.0);
      if (r.spike) CHECK(r.potential == 0.0);
    }
  }
}

TEST_CASE("output-mode membrane_step never spikes") {
  const auto r = MembraneStep(5.0, 0.99, 3.0, 1.0, false);
  CHECK_FALSE(r.spike);
  CHECK(r.potential == doctest::Approx(7.95));
}

TEST_CASE("output_probabilities examples") {
  const std::vector<double> v = {2.0, 1.0, 1.0};
  const auto p = OutputProbabilities(v);
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.25);
  CHECK(p[2] == 0.25);

  const std::vector<double> same(7, 0.3);
  for (double x : OutputProbabilities(same)) CHECK(x == doctest::Approx(1.0 / 7.0));

  const std::vector<double> tiny = {1e-30, 1e-30};
  const auto q = OutputProbabilities(tiny);
  CHECK(q[0] == 0.5);
  CHECK(q[1] == 0.5);
}

TEST_CASE("output_probabilities of positive inputs sums to one") {
  for (int n = 1; n <= 40; ++n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(0.01 + std::fmod(i * 0.7371, 3.0));
    const auto p = OutputProbabilities(v);
    double total = 0.0;
    for (double x : p) total += x;
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("output_probabilities clamps negative components") {
  const std::vector<double> v = {-3.0, 1.0};
  const auto p = OutputProbabilities(v);
  CHECK(p[0] == doctest::Approx(1e-12 / (1.0 + 1e-12)));
  CHECK(p[1] == doctest::Approx(1.0));
}

TEST_CASE("output_probabilities error paths") {
  const std::vector<double> bad = {0.0, -1.0};
  try {
    OutputProbabilities(bad);
    FAIL("expected a degenerate-output error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateOutput);
  }
  CHECK_THROWS_AS(OutputProbabilities(std::vector<double>{}), Error);
}

TEST_CASE("spike raster validates binary input") {
  CHECK_THROWS_AS(SpikeRaster::FromBits(2, 2, {0, 1, 2, 0}), Error);
  CHECK_THROWS_AS(SpikeRaster::FromBits(2, 2, {0, 1, 1}), Error);
  const auto r = SpikeRaster::FromBits(2, 2, {0, 1, 1, 1});
  CHECK(r.Count() == 3);
  CHECK(r.CountNeuron(1) == 2);
}

TEST_CASE("error kinds map to distinct exit codes per category") {
  CHECK(ExitCodeFor(ErrorKind::kConfig) == 2);
  CHECK(ExitCodeFor(ErrorKind::kCacheMiss) == 3);
  CHECK(ExitCodeFor(ErrorKind::kChecksum) == 3);
  CHECK(ExitCodeFor(ErrorKind::kDegenerateRun) == 4);
  CHECK(ExitCodeFor(ErrorKind::kIo) == 5);
  CHECK(ExitCodeFor(ErrorKind::kInternal) == 1);
}

}  // namespace
}  // namespace imsnn
