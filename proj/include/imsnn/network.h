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


#ifndef IMSNN_NETWORK_H_
#define IMSNN_NETWORK_H_

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imsnn/architecture.h"
#include "imsnn/core.h"
#include "imsnn/raster.h"

namespace imsnn {

// imsnn: Gaussian synapses, suppress ISI-lowering terms.
// snn: fixed weights (heights used directly).
// imsnn_c: Gaussian synapses, inverted suppression (ablation).
enum class Variant { kImsnn, kSnn, kImsnnC };

const char* VariantName(Variant variant);
Variant ParseVariant(std::string_view name);

inline bool UsesGaussianSynapses(Variant v) { return v != Variant::kSnn; }

struct InitConfig {
  double height_mean = 0.0;
  double height_std = 0.05;
  double mean_lo = 5.0;
  double mean_hi = 10.0;
  double width_lo = 10.0;
  double width_hi = 50.0;
};

struct NeuronParams {
  double beta = 0.99;
  double threshold = 1.0;
};

// One presynaptic -> postsynaptic link. `weight` indexes heights, `shape`
// indexes means/widths (shared across a conv kernel).
struct Connection {
  std::int32_t post = 0;
  std::int32_t weight = 0;
  std::int32_t shape = 0;
};

// Parameters and connectivity between two neuron layers. Dense banks store
// heights/means/widths row-major as [pre][post]. Conv banks store heights as
// [out_ch][in_ch][ky][kx] and means/widths as [out_ch][in_ch].
class SynapseBank {
 public:
  SynapseBank() = default;

  static SynapseBank Dense(int pre_size, int post_size);
  static SynapseBank Conv(const LayerSpec& spec);

  LayerKind kind() const { return kind_; }
  int pre_size() const { return pre_size_; }
  int post_size() const { return post_size_; }

  std::vector<double>& heights() { return heights_; }
  const std::vector<double>& heights() const { return heights_; }
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& widths() const { return widths_; }

  // Sets one mean/width pair. Only meant for initialization and fixtures;
  // training never calls it.
  void SetShape(int index, double mean, double width);

  std::span<const Connection> Outgoing(int pre) const {
    return {connections_.data() + offsets_[pre],
            static_cast<std::size_t>(offsets_[pre + 1] - offsets_[pre])};
  }
  std::size_t connection_count() const { return connections_.size(); }

  // GaussianFactor for this connection's mean/width.
  double Factor(const Connection& c, Isi isi) const {
    const double d = static_cast<double>(isi) - means_[c.shape];
    return std::exp(-d * d * inv_two_var_[c.shape]);
  }

  GaussianSynapse Synapse(const Connection& c) const {
    return {heights_[c.weight], means_[c.shape], widths_[c.shape]};
  }

 private:
  void BuildOffsets(std::vector<std::vector<Connection>> by_pre);

  LayerKind kind_ = LayerKind::kDense;
  int pre_size_ = 0;
  int post_size_ = 0;
  std::vector<double> heights_;
  std::vector<double> means_;
  std::vector<double> widths_;
  std::vector<double> inv_two_var_;
  std::vector<std::int32_t> offsets_;
  std::vector<Connection> connections_;
};

struct Network {
  std::string architecture;
  Variant variant = Variant::kImsnn;
  std::vector<LayerSpec> specs;
  std::vector<int> layer_sizes;    // input first, output last
  std::vector<SynapseBank> banks;  // banks[b] feeds layer b + 1

  int num_layers() const { return static_cast<int>(layer_sizes.size()); }
  int output_layer() const { return num_layers() - 1; }
  int hidden_layers() const { return num_layers() - 2; }
};

// All heights zero, all means 1 and widths 1.
Network BuildNetwork(std::string_view architecture, Variant variant);

// Heights ~ Normal(height_mean, height_std), means ~ U[mean_lo, mean_hi],
// widths ~ U[width_lo, width_hi]. Bit-identical for identical seeds.
Network InitNetwork(std::string_view architecture, Variant variant,
                    std::uint64_t seed, const InitConfig& init = {});

// Effective weight of a connection for a presynaptic ISI.
inline double EffectiveWeight(const SynapseBank& bank, const Connection& c,
                              Isi isi, Variant variant) {
  const double h = bank.heights()[c.weight];
  return UsesGaussianSynapses(variant) ? h * bank.Factor(c, isi) : h;
}

// Everything the backward pass needs about one layer. Rows are steps.
struct LayerTrace {
  SpikeRaster spikes;
  std::vector<double> potentials;  // pre-reset candidate potential; empty for the input layer
  std::vector<Isi> isis;           // ISI seen by a spike emitted at that step

  int steps() const { return spikes.steps(); }
  int neurons() const { return spikes.neurons(); }
  double potential(int t, int n) const {
    return potentials[static_cast<std::size_t>(t) * neurons() + n];
  }
  Isi isi(int t, int n) const {
    return isis[static_cast<std::size_t>(t) * neurons() + n];
  }
};

struct ForwardResult {
  std::vector<LayerTrace> layers;  // one per neuron layer, input first
  std::vector<double> output;      // output potentials after the last step

  int steps() const { return layers.front().steps(); }
};

// Runs the network over the input raster. Layer l at step t integrates the
// spikes of layer l-1 at step t-1 (weighted by the ISI those spikes saw),
// then thresholds. The output layer never spikes.
ForwardResult ForwardPass(const Network& net, const SpikeRaster& input,
                          const NeuronParams& neuron = {});

// ISI trace of a raster, starting from 0 before the first step.
std::vector<Isi> IsiTrace(const SpikeRaster& raster);

}  // namespace imsnn

#endif  // IMSNN_NETWORK_H_
