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


#ifndef IMSNN_SERIALIZE_H_
#define IMSNN_SERIALIZE_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "imsnn/backprop.h"
#include "imsnn/network.h"

namespace imsnn {

inline constexpr int kModelFormatVersion = 1;

// Shortest decimal that parses back to the same double.
std::string FormatDouble(double value);

// {format_version, architecture, variant, layers: [{kind, heights, means,
// widths}]} with row-major arrays.
std::string ModelToJson(const Network& net);
// Throws Error(kParse) on malformed documents or shape mismatches.
Network ModelFromJson(std::string_view text);

void SaveModel(const Network& net, const std::filesystem::path& path);
Network LoadModel(const std::filesystem::path& path);

// Debug dump of a backward pass keyed by layer and step.
std::string BackwardToJson(const BackwardResult& result, int steps);

}  // namespace imsnn

#endif  // IMSNN_SERIALIZE_H_
