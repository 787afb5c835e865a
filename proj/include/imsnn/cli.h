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


#ifndef IMSNN_CLI_H_
#define IMSNN_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "imsnn/config.h"
#include "imsnn/network.h"
#include "imsnn/training.h"

namespace imsnn {

// Version string recorded in run summaries.
std::string VersionString();

struct RunArtifacts {
  std::filesystem::path metrics_csv;
  std::filesystem::path summary_json;
  std::filesystem::path model_json;
};

// Appends records to metrics.csv (header on creation) and writes
// summary.json and model.json into `output_dir`.
RunArtifacts EmitResults(const std::vector<MetricsRecord>& records,
                         const RunConfig& config, const Network& net,
                         const std::filesystem::path& output_dir,
                         double wall_seconds);

// Header and one data row of metrics.csv.
std::string MetricsCsvHeader(int hidden_layers);
std::string MetricsCsvRow(const MetricsRecord& record);

// Entry point of the `imsnn` tool; args excludes the program name. Returns
// the process exit code.
int RunSubcommand(const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err);

}  // namespace imsnn

#endif  // IMSNN_CLI_H_
