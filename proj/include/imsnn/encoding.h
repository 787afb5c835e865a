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


#ifndef IMSNN_ENCODING_H_
#define IMSNN_ENCODING_H_

#include <cstdint>
#include <span>
#include <string_view>

#include "imsnn/raster.h"

namespace imsnn {

enum class EncoderScheme { kDeterministicPhase, kPoisson };

const char* EncoderSchemeName(EncoderScheme scheme);
EncoderScheme ParseEncoderScheme(std::string_view name);

struct EncoderConfig {
  int steps = 100;
  double dt_ms = 1.0;
  double rate_min_hz = 28.5;
  double rate_max_hz = 100.0;
  EncoderScheme scheme = EncoderScheme::kDeterministicPhase;
  std::uint64_t seed = 0;
};

// Throws Error(kConfig) unless 0 < rate_min <= rate_max, steps >= 1 and at
// most one spike per step is possible.
void ValidateEncoderConfig(const EncoderConfig& config);

// Rate code: rate(x) = rate_min + x (rate_max - rate_min).
// Deterministic phase: a spike at step t (1-based) iff the phase
// t * rate * dt / 1000 crosses an integer. Poisson: independent Bernoulli
// draws per step from `config.seed`. Pixels must lie in [0, 1].
SpikeRaster Encode(std::span<const double> pixels, const EncoderConfig& config);

}  // namespace imsnn

#endif  // IMSNN_ENCODING_H_
