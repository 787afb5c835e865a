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


#include "imsnn/raster.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "imsnn/errors.h"

namespace imsnn {

SpikeRaster::SpikeRaster(int steps, int neurons)
    : steps_(steps), neurons_(neurons) {
  if (steps < 0 || neurons < 0) {
    throw Error(ErrorKind::kValidation, "raster dimensions must be nonnegative");
  }
  bits_.assign(static_cast<std::size_t>(steps) * neurons, 0);
}

SpikeRaster SpikeRaster::FromBits(int steps, int neurons,
                                  std::vector<std::uint8_t> bits) {
  SpikeRaster r;
  if (steps < 0 || neurons < 0 ||
      bits.size() != static_cast<std::size_t>(steps) * neurons) {
    throw Error(ErrorKind::kValidation,
                "raster data has " + std::to_string(bits.size()) +
                    " entries, expected " + std::to_string(steps) + " x " +
                    std::to_string(neurons));
  }
  auto bad = std::find_if(bits.begin(), bits.end(),
                          [](std::uint8_t b) { return b > 1; });
  if (bad != bits.end()) {
    throw Error(ErrorKind::kValidation,
                "non-binary raster entry at flat index " +
                    std::to_string(bad - bits.begin()));
  }
  r.steps_ = steps;
  r.neurons_ = neurons;
  r.bits_ = std::move(bits);
  return r;
}

std::int64_t SpikeRaster::Count() const {
  return std::accumulate(bits_.begin(), bits_.end(), std::int64_t{0});
}

std::int64_t SpikeRaster::CountNeuron(int neuron) const {
  std::int64_t n = 0;
  for (int t = 0; t < steps_; ++t) n += at(t, neuron) ? 1 : 0;
  return n;
}

}  // namespace imsnn
