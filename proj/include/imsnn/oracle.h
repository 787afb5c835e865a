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


#ifndef IMSNN_ORACLE_H_
#define IMSNN_ORACLE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "imsnn/backprop.h"
#include "imsnn/network.h"
#include "imsnn/raster.h"

namespace imsnn {

// Size guard for the literal nested-sum backward: non-input neurons and steps.
inline constexpr int kOracleMaxNeurons = 128;
inline constexpr int kOracleMaxSteps = 25;

// The backward pass evaluated as the literal nested sums over (h, k, m) for
// every (j, t), with no accumulators or next-spike shortcuts. Same result
// layout as Backward. Throws Error(kGuard) past the size guard.
BackwardResult DirectSumBackward(const Network& net,
                                 const ForwardResult& forward,
                                 std::span<const double> output_grad,
                                 const NeuronParams& neuron,
                                 const BackwardConfig& config);

struct GradCheckEntry {
  int bank = 0;
  int index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  bool valid = true;  // false if the perturbation changed a raster or hit the guard
  bool pass = false;
};

struct GradCheckReport {
  double step = 0.0;
  double tolerance = 0.0;
  double scale_floor = 0.0;  // relative errors use max(|a|, |n|, scale_floor)
  std::string regime;        // "ok", "truncation-dominated", "roundoff-dominated"
  std::vector<GradCheckEntry> entries;
  int valid_count = 0;
  int invalid_count = 0;
  double max_rel_error = 0.0;
  bool passed = false;
};

struct GradCheckOptions {
  double step = 1e-6;
  double tolerance = 1e-6;
  double scale_floor = 1e-3;
  int max_coords = 50;
  std::uint64_t seed = 0;
};

// Central differences of the true cross-entropy loss with respect to sampled
// output-layer heights. Perturbing those heights cannot change any spike
// raster, so the check is exact up to truncation and roundoff.
GradCheckReport FdCheckLastLayer(const Network& net, const SpikeRaster& input,
                                 int label, const NeuronParams& neuron,
                                 const BackwardConfig& backward,
                                 const GradCheckOptions& options = {});

std::string GradCheckReportToJson(const GradCheckReport& report);

// Single LIF neuron fed a 10-step periodic input for 100 steps through
// (a) a fixed 0.6 weight, (b) a Gaussian synapse with mean 10, width 5,
// height 0.6 and (c) the same with mean 15.
struct DemoResult {
  SpikeRaster input;
  SpikeRaster conventional;
  SpikeRaster matched;
  SpikeRaster shifted;
  double matched_inflow = 0.0;  // per-spike inflow in (b)
  double shifted_inflow = 0.0;  // per-spike inflow in (c)
  bool identical = false;       // (a) == (b) bit for bit
  bool ordered = false;         // count(b) > count(c)
  bool passed() const { return identical && ordered; }
};

DemoResult DemoSingleNeuron(const NeuronParams& neuron = {});

// CSV with columns timestep,neuron,spike; one row per cell.
void WriteRasterCsv(const std::filesystem::path& path,
                    const SpikeRaster& raster);

}  // namespace imsnn

#endif  // IMSNN_ORACLE_H_
