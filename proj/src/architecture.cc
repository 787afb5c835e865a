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


#include "imsnn/architecture.h"

#include <charconv>
#include <cmath>
#include <optional>

#include "imsnn/errors.h"

namespace imsnn {
namespace {

[[noreturn]] void Fail(std::size_t token, std::string_view text,
                       const std::string& why) {
  throw Error(ErrorKind::kParse, "architecture token " + std::to_string(token) +
                                     " ('" + std::string(text) + "'): " + why);
}

std::optional<int> ParsePositive(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value <= 0) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

const char* LayerKindName(LayerKind kind) {
  switch (kind) {
    case LayerKind::kDense: return "dense";
    case LayerKind::kConv: return "conv";
    case LayerKind::kFlatten: return "flatten";
    case LayerKind::kOutput: return "output";
  }
  return "unknown";
}

std::vector<LayerSpec> ParseArchitecture(std::string_view spec) {
  std::vector<std::string_view> tokens;
  std::size_t start = 0;
  while (true) {
    const std::size_t dash = spec.find('-', start);
    tokens.push_back(spec.substr(start, dash == std::string_view::npos
                                            ? std::string_view::npos
                                            : dash - start));
    if (dash == std::string_view::npos) break;
    start = dash + 1;
  }
  if (tokens.size() < 2) {
    Fail(0, spec, "need at least an input size and a class count");
  }

  const auto input = ParsePositive(tokens[0]);
  if (!input) Fail(0, tokens[0], "input size must be a positive integer");
  MapShape shape{1, 1, *input};
  bool spatial = false;
  const int side = static_cast<int>(std::lround(std::sqrt(*input)));
  if (side * side == *input) {
    shape = {1, side, side};
    spatial = true;
  }

  std::vector<LayerSpec> layers;
  bool after_conv = false;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const std::string_view tok = tokens[i];
    const bool last = i + 1 == tokens.size();
    const std::size_t c = tok.find('c');
    if (c != std::string_view::npos) {
      if (last) Fail(i, tok, "the last token must be the class count");
      const auto channels = ParsePositive(tok.substr(0, c));
      const auto kernel = ParsePositive(tok.substr(c + 1));
      if (!channels || !kernel) Fail(i, tok, "expected <channels>c<kernel>");
      if (!spatial) Fail(i, tok, "conv layer needs a 2-D input map");
      if (*kernel > shape.height || *kernel > shape.width) {
        Fail(i, tok, "kernel larger than the " + std::to_string(shape.height) +
                         "x" + std::to_string(shape.width) + " input map");
      }
      LayerSpec l;
      l.kind = LayerKind::kConv;
      l.in_channels = shape.channels;
      l.out_channels = *channels;
      l.kernel = *kernel;
      l.in_shape = shape;
      l.out_shape = {*channels, shape.height - *kernel + 1,
                     shape.width - *kernel + 1};
      l.fan_in = l.in_shape.size();
      l.fan_out = l.out_shape.size();
      layers.push_back(l);
      shape = l.out_shape;
      after_conv = true;
      continue;
    }

    const auto width = ParsePositive(tok);
    if (!width) Fail(i, tok, "expected a layer width or <channels>c<kernel>");
    if (after_conv) {
      LayerSpec f;
      f.kind = LayerKind::kFlatten;
      f.fan_in = f.fan_out = shape.size();
      f.in_shape = shape;
      f.out_shape = {1, 1, shape.size()};
      layers.push_back(f);
      after_conv = false;
    }
    LayerSpec l;
    l.kind = last ? LayerKind::kOutput : LayerKind::kDense;
    l.fan_in = shape.size();
    l.fan_out = *width;
    l.in_shape = {1, 1, shape.size()};
    l.out_shape = {1, 1, *width};
    layers.push_back(l);
    shape = l.out_shape;
    spatial = false;
  }
  return layers;
}

std::vector<int> LayerSizes(const std::vector<LayerSpec>& specs) {
  std::vector<int> sizes;
  if (specs.empty()) return sizes;
  sizes.push_back(specs.front().fan_in);
  for (const LayerSpec& s : specs) {
    if (s.kind != LayerKind::kFlatten) sizes.push_back(s.fan_out);
  }
  return sizes;
}

}  // namespace imsnn
