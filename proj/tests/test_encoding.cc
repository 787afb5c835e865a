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
#include "imsnn/encoding.h"
#include "imsnn/errors.h"

namespace imsnn {
namespace {

std::vector<int> SpikeSteps(const SpikeRaster& r, int neuron) {
  std::vector<int> steps;
  for (int t = 0; t < r.steps(); ++t) {
    if (r.at(t, neuron)) steps.push_back(t + 1);
  }
  return steps;
}

TEST_CASE("deterministic encoder examples") {
  const std::vector<double> px = {1.0, 0.0, 0.5};
  const SpikeRaster r = Encode(px, {});
  CHECK(r.steps() == 100);
  CHECK(r.CountNeuron(0) == 10);
  CHECK(SpikeSteps(r, 0) == std::vector<int>{10, 20, 30, 40, 50, 60, 70, 80, 90, 100});
  CHECK(SpikeSteps(r, 1) == std::vector<int>{36, 71});
  CHECK(SpikeSteps(r, 2) == std::vector<int>{16, 32, 47, 63, 78, 94});
}

TEST_CASE("deterministic spike count is floor(T rate dt / 1000) for every byte pixel") {
  EncoderConfig cfg;
  std::vector<double> px;
  for (int b = 0; b < 256; ++b) px.push_back(b / 255.0);
  const SpikeRaster r = Encode(px, cfg);
  std::int64_t prev = 0;
  for (int b = 0; b < 256; ++b) {
    const double rate = 28.5 + px[b] * (100.0 - 28.5);
    const auto expected = static_cast<std::int64_t>(std::floor(100.0 * rate / 1000.0 + 1e-9));
    CHECK(r.CountNeuron(b) == expected);
    CHECK(r.CountNeuron(b) >= prev);
    prev = r.CountNeuron(b);
  }
}

TEST_CASE("deterministic spike count for other durations and steps") {
  EncoderConfig cfg;
  cfg.steps = 250;
  cfg.dt_ms = 2.0;
  const std::vector<double> px = {0.0, 0.3, 1.0};
  const SpikeRaster r = Encode(px, cfg);
  for (int i = 0; i < 3; ++i) {
    const double rate = 28.5 + px[i] * 71.5;
    CHECK(r.CountNeuron(i) == static_cast<std::int64_t>(std::floor(250 * rate * 2.0 / 1000.0 + 1e-9)));
  }
}

TEST_CASE("poisson encoder matches its rate within three standard errors") {
  EncoderConfig cfg;
  cfg.scheme = EncoderScheme::kPoisson;
  cfg.steps = 1000;
  cfg.seed = 17;
  const std::vector<double> px(100, 0.5);  // 100 neurons x 1000 steps = 1e5 trials
  const SpikeRaster r = Encode(px, cfg);
  const double p = 64.25 / 1000.0;
  const double n = 1e5;
  const double se = std::sqrt(p * (1.0 - p) / n);
  CHECK(std::abs(static_cast<double>(r.Count()) / n - p) <= 3.0 * se);
}

TEST_CASE("encoding is deterministic given pixels, config and seed") {
  EncoderConfig cfg;
  cfg.scheme = EncoderScheme::kPoisson;
  cfg.seed = 5;
  const std::vector<double> px = {0.1, 0.9, 0.4};
  CHECK(Encode(px, cfg) == Encode(px, cfg));
  EncoderConfig other = cfg;
  other.seed = 6;
  CHECK_FALSE(Encode(px, cfg) == Encode(px, other));
  cfg.scheme = EncoderScheme::kDeterministicPhase;
  CHECK(Encode(px, cfg) == Encode(px, cfg));
}

TEST_CASE("encoder rejects out-of-range pixels and bad configs") {
  const std::vector<double> bad = {0.5, 1.01};
  try {
    Encode(bad, {});
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kValidation);
  }
  CHECK_THROWS_AS(Encode(std::vector<double>{-0.1}, {}), Error);
  CHECK_THROWS_AS(Encode(std::vector<double>{NAN}, {}), Error);
  EncoderConfig cfg;
  cfg.rate_max_hz = 2000.0;
  CHECK_THROWS_AS(ValidateEncoderConfig(cfg), Error);
  cfg = {};
  cfg.rate_min_hz = 0.0;
  CHECK_THROWS_AS(ValidateEncoderConfig(cfg), Error);
  cfg = {};
  cfg.rate_min_hz = 50.0;
  cfg.rate_max_hz = 40.0;
  CHECK_THROWS_AS(ValidateEncoderConfig(cfg), Error);
  CHECK(ParseEncoderScheme("poisson") == EncoderScheme::kPoisson);
  CHECK_THROWS_AS(ParseEncoderScheme("latency"), Error);
}

}  // namespace
}  // namespace imsnn
