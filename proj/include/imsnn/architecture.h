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


#ifndef IMSNN_ARCHITECTURE_H_
#define IMSNN_ARCHITECTURE_H_

#include <string>
#include <string_view>
#include <vector>

namespace imsnn {

enum class LayerKind { kDense, kConv, kFlatten, kOutput };

const char* LayerKindName(LayerKind kind);

// Channel-major feature map shape. A plain vector is {1, 1, size}.
struct MapShape {
  int channels = 1;
  int height = 1;
  int width = 1;

  int size() const { return channels * height * width; }
  bool operator==(const MapShape&) const = default;
};

struct LayerSpec {
  LayerKind kind = LayerKind::kDense;
  int fan_in = 0;
  int fan_out = 0;
  // Conv only. Stride 1, no padding.
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 0;
  int stride = 1;
  int padding = 0;
  MapShape in_shape;
  MapShape out_shape;

  bool operator==(const LayerSpec&) const = default;
};

// Parses "784-48c5-8c5-500-10" style strings. The first token is the input
// size (a perfect square is read as a 1-channel square map), the last is the
// class count and becomes the output layer. A dense token after a conv layer
// inserts a Flatten. Throws Error(kParse) naming the offending token index.
std::vector<LayerSpec> ParseArchitecture(std::string_view spec);

// Neuron counts per layer, input first, Flatten entries skipped.
std::vector<int> LayerSizes(const std::vector<LayerSpec>& specs);

}  // namespace imsnn

#endif  // IMSNN_ARCHITECTURE_H_
