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


#ifndef IMSNN_RASTER_H_
#define IMSNN_RASTER_H_

#include <cstdint>
#include <span>
#include <vector>

namespace imsnn {

// Binary spike tensor of shape steps x neurons, stored row-major by step.
class SpikeRaster {
 public:
  SpikeRaster() = default;
  SpikeRaster(int steps, int neurons);

  // Takes ownership of `bits` (values must be 0 or 1, checked).
  static SpikeRaster FromBits(int steps, int neurons,
                              std::vector<std::uint8_t> bits);

  int steps() const { return steps_; }
  int neurons() const { return neurons_; }

  bool at(int step, int neuron) const {
    return bits_[static_cast<std::size_t>(step) * neurons_ + neuron] != 0;
  }
  void set(int step, int neuron, bool spike) {
    bits_[static_cast<std::size_t>(step) * neurons_ + neuron] = spike ? 1 : 0;
  }

  std::span<const std::uint8_t> row(int step) const {
    return {bits_.data() + static_cast<std::size_t>(step) * neurons_,
            static_cast<std::size_t>(neurons_)};
  }
  std::span<std::uint8_t> row(int step) {
    return {bits_.data() + static_cast<std::size_t>(step) * neurons_,
            static_cast<std::size_t>(neurons_)};
  }

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::int64_t Count() const;
  std::int64_t CountNeuron(int neuron) const;

  bool operator==(const SpikeRaster& other) const = default;

 private:
  int steps_ = 0;
  int neurons_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace imsnn

#endif  // IMSNN_RASTER_H_
