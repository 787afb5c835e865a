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


#ifndef IMSNN_TRAINING_H_
#define IMSNN_TRAINING_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "imsnn/backprop.h"
#include "imsnn/dataio.h"
#include "imsnn/encoding.h"
#include "imsnn/network.h"

namespace imsnn {

struct LossResult {
  double loss = 0.0;
  std::vector<double> probabilities;
  std::vector<double> grad;  // dL/dv(T) w.r.t. the raw output potentials
};

// -log p_label with p from OutputProbabilities. Clamped components get a zero
// gradient. Throws Error(kDegenerateOutput) like OutputProbabilities.
LossResult CrossEntropy(std::span<const double> potentials, int label);

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Moment buffers for every height of a network.
struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::int64_t step = 0;

  static AdamState For(const Network& net);
};

// Bias-corrected Adam update of one parameter vector at step t >= 1.
void AdamStep(std::span<double> params, std::span<const double> grads,
              std::span<double> m, std::span<double> v, std::int64_t t,
              const AdamConfig& config);

// Advances state.step and updates every bank's heights. Means and widths are
// not touched.
void AdamStep(Network& net, const std::vector<std::vector<double>>& grads,
              AdamState& state, const AdamConfig& config);

struct TrainConfig {
  int epochs = 20;
  int batch_size = 128;
  NeuronParams neuron;
  EncoderConfig encoder;
  AdamConfig adam;
  double surrogate_slope = 10.0;
  std::uint64_t seed = 0;
  int threads = 1;
};

// One row of the metrics sink.
struct MetricsRecord {
  int epoch = 0;
  std::string split;
  double accuracy = 0.0;                // percent
  std::vector<double> layer_spikes;     // spikes per neuron, hidden layers only
  double network_spikes = 0.0;          // sum of layer_spikes
  double loss = 0.0;                    // mean over non-degenerate samples
  double suppressed_fraction = 0.0;     // training rows only
  std::int64_t samples = 0;
  std::int64_t degenerate = 0;
};

// Spikes per neuron, averaged over samples: total / (neurons * samples).
double SpikesPerNeuron(std::int64_t total_spikes, std::int64_t neurons,
                       std::int64_t samples = 1);

// Accuracy and spike metrics of a fixed network. Degenerate samples count as
// incorrect. Throws Error(kValidation) on an empty dataset.
MetricsRecord Evaluate(const Network& net, const Dataset& data,
                       const TrainConfig& config);

using MetricsCallback = std::function<void(const MetricsRecord&)>;

// Shuffled mini-batch training with Adam on the mean per-sample gradient.
// Per epoch emits a "train" record (running metrics gathered during the
// epoch) and, if `test` is non-null, a "test" record from Evaluate.
// Throws Error(kDegenerateRun) if an epoch has no trainable sample.
std::vector<MetricsRecord> Train(Network& net, const Dataset& train,
                                 const Dataset* test, const TrainConfig& config,
                                 const MetricsCallback& sink = nullptr);

}  // namespace imsnn

#endif  // IMSNN_TRAINING_H_
