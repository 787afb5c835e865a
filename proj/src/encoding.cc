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


#include "imsnn/encoding.h"

#include <cmath>
#include <random>
#include <string>

#include "imsnn/errors.h"

namespace imsnn {
namespace {

// Phase values within this distance of an integer count as having reached
// it. Byte-valued pixels never land closer than ~1.7e-5 without being exact.
constexpr double kPhaseTolerance = 1e-9;

}  // namespace

const char* EncoderSchemeName(EncoderScheme scheme) {
  switch (scheme) {
    case EncoderScheme::kDeterministicPhase: return "deterministic";
    case EncoderScheme::kPoisson: return "poisson";
  }
  return "unknown";
}

EncoderScheme ParseEncoderScheme(std::string_view name) {
  if (name == "deterministic" || name == "deterministic-phase") {
    return EncoderScheme::kDeterministicPhase;
  }
  if (name == "poisson") return EncoderScheme::kPoisson;
  throw Error(ErrorKind::kConfig, "unknown encoder scheme '" +
                                      std::string(name) +
                                      "' (expected deterministic or poisson)");
}

void ValidateEncoderConfig(const EncoderConfig& config) {
  if (config.steps < 1) throw Error(ErrorKind::kConfig, "encoder steps must be >= 1");
  if (!(config.dt_ms > 0.0)) throw Error(ErrorKind::kConfig, "dt must be positive");
  if (!(config.rate_min_hz > 0.0) || config.rate_max_hz < config.rate_min_hz) {
    throw Error(ErrorKind::kConfig, "need 0 < rate_min <= rate_max");
  }
  if (config.rate_max_hz * config.dt_ms / 1000.0 > 1.0) {
    throw Error(ErrorKind::kConfig,
                "rate_max * dt exceeds one spike per step");
  }
}

SpikeRaster Encode(std::span<const double> pixels, const EncoderConfig& config) {
  ValidateEncoderConfig(config);
  const int n = static_cast<int>(pixels.size());
  for (int i = 0; i < n; ++i) {
    if (!(pixels[i] >= 0.0 && pixels[i] <= 1.0)) {
      throw Error(ErrorKind::kValidation,
                  "pixel " + std::to_string(i) + " outside [0, 1]");
    }
  }
  SpikeRaster raster(config.steps, n);
  const double span = config.rate_max_hz - config.rate_min_hz;
  if (config.scheme == EncoderScheme::kDeterministicPhase) {
    for (int i = 0; i < n; ++i) {
      const double p = (config.rate_min_hz + pixels[i] * span) * config.dt_ms / 1000.0;
      double prev = 0.0;
      for (int t = 1; t <= config.steps; ++t) {
        const double count = std::floor(t * p + kPhaseTolerance);
        if (count > prev) raster.set(t - 1, i, true);
        prev = count;
      }
    }
  } else {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < config.steps; ++t) {
      for (int i = 0; i < n; ++i) {
        const double p = (config.rate_min_hz + pixels[i] * span) * config.dt_ms / 1000.0;
        raster.set(t, i, u(rng) < p);
      }
    }
  }
  return raster;
}

}  // namespace imsnn
