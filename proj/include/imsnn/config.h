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


#ifndef IMSNN_CONFIG_H_
#define IMSNN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "imsnn/encoding.h"
#include "imsnn/network.h"
#include "imsnn/training.h"
#include "json.hpp"

namespace imsnn {

// Effective settings of one run. Every key of the JSON form is listed in
// RunConfigToJson; unknown keys are rejected.
struct RunConfig {
  std::string dataset = "mnist";
  std::string architecture = "784-500-10";
  Variant variant = Variant::kImsnn;
  EncoderConfig encoder;  // steps and dt come from "T" and "dt"
  double beta = 0.99;
  double theta = 1.0;
  double surrogate_slope = 10.0;
  double lr = 1e-4;
  int epochs = 20;
  int batch_size = 128;
  std::uint64_t seed = 0;
  std::optional<std::size_t> limit;       // training subset
  std::optional<std::size_t> test_limit;  // test subset
  std::string cache_dir;                  // empty: default cache
  std::string output_dir = "runs/latest";
  int threads = 1;
  bool offline = false;
};

// Accepts a config document or a run summary (whose "config" member is
// used). Throws Error(kConfig) on unknown keys, wrong types, bad values.
RunConfig RunConfigFromJson(const nlohmann::json& doc);
nlohmann::json RunConfigToJson(const RunConfig& config);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Throws Error(kConfig) describing the first invalid field.
void ValidateRunConfig(const RunConfig& config);

TrainConfig ToTrainConfig(const RunConfig& config);

}  // namespace imsnn

#endif  // IMSNN_CONFIG_H_
