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


#include "imsnn/network.h"

#include <random>
#include <string>

#include "imsnn/errors.h"

namespace imsnn {

const char* VariantName(Variant variant) {
  switch (variant) {
    case Variant::kImsnn: return "imsnn";
    case Variant::kSnn: return "snn";
    case Variant::kImsnnC: return "imsnn_c";
  }
  return "unknown";
}

Variant ParseVariant(std::string_view name) {
  if (name == "imsnn") return Variant::kImsnn;
  if (name == "snn") return Variant::kSnn;
  if (name == "imsnn_c") return Variant::kImsnnC;
  throw Error(ErrorKind::kConfig, "unknown variant '" + std::string(name) +
                                      "' (expected imsnn, snn or imsnn_c)");
}

SynapseBank SynapseBank::Dense(int pre_size, int post_size) {
  SynapseBank bank;
  bank.kind_ = LayerKind::kDense;
  bank.pre_size_ = pre_size;
  bank.post_size_ = post_size;
  const std::size_t n = static_cast<std::size_t>(pre_size) * post_size;
  bank.heights_.assign(n, 0.0);
  bank.means_.assign(n, 1.0);
  bank.widths_.assign(n, 1.0);
  bank.inv_two_var_.assign(n, 0.5);
  bank.offsets_.resize(pre_size + 1);
  bank.connections_.resize(n);
  for (int i = 0; i < pre_size; ++i) {
    bank.offsets_[i] = i * post_size;
    for (int j = 0; j < post_size; ++j) {
      const std::int32_t idx = i * post_size + j;
      bank.connections_[idx] = {j, idx, idx};
    }
  }
  bank.offsets_[pre_size] = static_cast<std::int32_t>(n);
  return bank;
}

SynapseBank SynapseBank::Conv(const LayerSpec& spec) {
  SynapseBank bank;
  bank.kind_ = LayerKind::kConv;
  bank.pre_size_ = spec.in_shape.size();
  bank.post_size_ = spec.out_shape.size();
  const int ic_n = spec.in_channels;
  const int oc_n = spec.out_channels;
  const int k = spec.kernel;
  const int in_h = spec.in_shape.height, in_w = spec.in_shape.width;
  const int out_h = spec.out_shape.height, out_w = spec.out_shape.width;
  bank.heights_.assign(static_cast<std::size_t>(oc_n) * ic_n * k * k, 0.0);
  bank.means_.assign(static_cast<std::size_t>(oc_n) * ic_n, 1.0);
  bank.widths_.assign(bank.means_.size(), 1.0);
  bank.inv_two_var_.assign(bank.means_.size(), 0.5);

  std::vector<std::vector<Connection>> by_pre(bank.pre_size_);
  for (int oc = 0; oc < oc_n; ++oc) {
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        const int post = (oc * out_h + oy) * out_w + ox;
        for (int ic = 0; ic < ic_n; ++ic) {
          const int shape = oc * ic_n + ic;
          for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
              const int pre = (ic * in_h + oy + ky) * in_w + ox + kx;
              const int weight = (shape * k + ky) * k + kx;
              by_pre[pre].push_back({post, weight, shape});
            }
          }
        }
      }
    }
  }
  bank.BuildOffsets(std::move(by_pre));
  return bank;
}

void SynapseBank::BuildOffsets(std::vector<std::vector<Connection>> by_pre) {
  offsets_.assign(by_pre.size() + 1, 0);
  std::size_t total = 0;
  for (const auto& v : by_pre) total += v.size();
  connections_.clear();
  connections_.reserve(total);
  for (std::size_t i = 0; i < by_pre.size(); ++i) {
    offsets_[i] = static_cast<std::int32_t>(connections_.size());
    connections_.insert(connections_.end(), by_pre[i].begin(), by_pre[i].end());
  }
  offsets_[by_pre.size()] = static_cast<std::int32_t>(connections_.size());
}

void SynapseBank::SetShape(int index, double mean, double width) {
  if (!(width > 0.0)) {
    throw Error(ErrorKind::kValidation, "synapse width must be positive");
  }
  means_.at(index) = mean;
  widths_.at(index) = width;
  inv_two_var_.at(index) = 1.0 / (2.0 * width * width);
}

Network BuildNetwork(std::string_view architecture, Variant variant) {
  Network net;
  net.architecture = std::string(architecture);
  net.variant = variant;
  net.specs = ParseArchitecture(architecture);
  net.layer_sizes = LayerSizes(net.specs);
  for (const LayerSpec& s : net.specs) {
    switch (s.kind) {
      case LayerKind::kConv:
        net.banks.push_back(SynapseBank::Conv(s));
        break;
      case LayerKind::kDense:
      case LayerKind::kOutput:
        net.banks.push_back(SynapseBank::Dense(s.fan_in, s.fan_out));
        break;
      case LayerKind::kFlatten:
        break;
    }
  }
  return net;
}

Network InitNetwork(std::string_view architecture, Variant variant,
                    std::uint64_t seed, const InitConfig& init) {
  Network net = BuildNetwork(architecture, variant);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> height(init.height_mean, init.height_std);
  std::uniform_real_distribution<double> mean(init.mean_lo, init.mean_hi);
  std::uniform_real_distribution<double> width(init.width_lo, init.width_hi);
  for (SynapseBank& bank : net.banks) {
    for (double& w : bank.heights()) w = height(rng);
    const int shapes = static_cast<int>(bank.means().size());
    for (int s = 0; s < shapes; ++s) {
      const double mu = mean(rng);
      const double sigma = width(rng);
      bank.SetShape(s, mu, sigma);
    }
  }
  return net;
}

std::vector<Isi> IsiTrace(const SpikeRaster& raster) {
  const int steps = raster.steps();
  const int n = raster.neurons();
  std::vector<Isi> isis(static_cast<std::size_t>(steps) * n);
  std::vector<Isi> phi(n, 0);
  std::vector<std::uint8_t> prev(n, 0);
  for (int t = 0; t < steps; ++t) {
    for (int i = 0; i < n; ++i) {
      phi[i] = IsiUpdate(phi[i], prev[i] != 0);
      isis[static_cast<std::size_t>(t) * n + i] = phi[i];
    }
    auto row = raster.row(t);
    std::copy(row.begin(), row.end(), prev.begin());
  }
  return isis;
}

ForwardResult ForwardPass(const Network& net, const SpikeRaster& input,
                          const NeuronParams& neuron) {
  if (input.neurons() != net.layer_sizes.front()) {
    throw Error(ErrorKind::kValidation,
                "input raster has " + std::to_string(input.neurons()) +
                    " neurons, network expects " +
                    std::to_string(net.layer_sizes.front()));
  }
  if (input.steps() < 1) {
    throw Error(ErrorKind::kValidation, "input raster needs at least one step");
  }
  const int steps = input.steps();
  const bool gaussian = UsesGaussianSynapses(net.variant);

  ForwardResult result;
  result.layers.resize(net.num_layers());
  result.layers[0].spikes = input;
  result.layers[0].isis = IsiTrace(input);

  std::vector<double> inflow;
  std::vector<double> state;
  for (int l = 1; l < net.num_layers(); ++l) {
    const int n = net.layer_sizes[l];
    const bool can_spike = l != net.output_layer();
    const LayerTrace& prev = result.layers[l - 1];
    const SynapseBank& bank = net.banks[l - 1];
    const std::vector<double>& heights = bank.heights();
    LayerTrace& trace = result.layers[l];
    trace.spikes = SpikeRaster(steps, n);
    trace.potentials.assign(static_cast<std::size_t>(steps) * n, 0.0);
    inflow.assign(n, 0.0);
    state.assign(n, 0.0);

    for (int t = 0; t < steps; ++t) {
      std::fill(inflow.begin(), inflow.end(), 0.0);
      if (t > 0) {
        auto fired = prev.spikes.row(t - 1);
        for (int i = 0; i < prev.neurons(); ++i) {
          if (!fired[i]) continue;
          const Isi isi = prev.isi(t - 1, i);
          if (gaussian) {
            for (const Connection& c : bank.Outgoing(i)) {
              inflow[c.post] += heights[c.weight] * bank.Factor(c, isi);
            }
          } else {
            for (const Connection& c : bank.Outgoing(i)) {
              inflow[c.post] += heights[c.weight];
            }
          }
        }
      }
      double* v_row = trace.potentials.data() + static_cast<std::size_t>(t) * n;
      auto s_row = trace.spikes.row(t);
      for (int j = 0; j < n; ++j) {
        v_row[j] = neuron.beta * state[j] + inflow[j];
        const MembraneStepResult r = MembraneStep(
            state[j], neuron.beta, inflow[j], neuron.threshold, can_spike);
        state[j] = r.potential;
        s_row[j] = r.spike ? 1 : 0;
      }
    }
    trace.isis = IsiTrace(trace.spikes);
  }

  const LayerTrace& out = result.layers.back();
  result.output.assign(out.potentials.end() - out.neurons(),
                       out.potentials.end());
  return result;
}

}  // namespace imsnn
