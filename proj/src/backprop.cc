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


#include "imsnn/backprop.h"

#include <cmath>
#include <string>

#include "imsnn/errors.h"

namespace imsnn {

const char* SuppressionModeName(SuppressionMode mode) {
  switch (mode) {
    case SuppressionMode::kImsnn: return "imsnn";
    case SuppressionMode::kImsnnC: return "imsnn_c";
    case SuppressionMode::kNone: return "none";
  }
  return "unknown";
}

SuppressionMode ParseSuppressionMode(std::string_view name) {
  if (name == "imsnn") return SuppressionMode::kImsnn;
  if (name == "imsnn_c") return SuppressionMode::kImsnnC;
  if (name == "none") return SuppressionMode::kNone;
  throw Error(ErrorKind::kConfig,
              "unknown suppression mode '" + std::string(name) + "'");
}

SuppressionMode ModeForVariant(Variant variant) {
  switch (variant) {
    case Variant::kImsnn: return SuppressionMode::kImsnn;
    case Variant::kImsnnC: return SuppressionMode::kImsnnC;
    case Variant::kSnn: return SuppressionMode::kNone;
  }
  return SuppressionMode::kNone;
}

double SurrogateSpikeDerivative(double potential, double threshold,
                                double slope) {
  const double d = 1.0 + slope * std::abs(potential - threshold);
  return 1.0 / (d * d);
}

double DthetaDw(const GaussianSynapse& synapse, Isi isi) {
  return GaussianFactor(synapse.mean, synapse.width, isi);
}

double DthetaDphiBase(const GaussianSynapse& synapse, Isi isi) {
  const double d = static_cast<double>(isi) - synapse.mean;
  return -d * SynapseWeight(synapse, isi) / (synapse.width * synapse.width);
}

double DthetaDphi(const GaussianSynapse& synapse, Isi isi, double isi_gradient,
                  SuppressionMode mode) {
  if (!IsiTermPasses(mode, isi_gradient)) return 0.0;
  return DthetaDphiBase(synapse, isi);
}

double DphiDs(Isi isi_at_t, std::span<const std::uint8_t> between) {
  for (std::uint8_t s : between) {
    if (s) return 0.0;
  }
  return -static_cast<double>(isi_at_t);
}

BackwardResult Backward(const Network& net, const ForwardResult& forward,
                        std::span<const double> output_grad,
                        const NeuronParams& neuron,
                        const BackwardConfig& config) {
  const int layers = net.num_layers();
  const int steps = forward.steps();
  const int n_out = net.layer_sizes.back();
  if (static_cast<int>(output_grad.size()) != n_out ||
      static_cast<int>(forward.layers.size()) != layers) {
    throw Error(ErrorKind::kValidation,
                "backward: output gradient or trace shape does not match the network");
  }
  const double beta = neuron.beta;
  const bool gaussian = UsesGaussianSynapses(net.variant);
  const SuppressionMode mode = gaussian ? config.mode : SuppressionMode::kNone;

  BackwardResult res;
  res.height_grads.resize(net.banks.size());
  res.epsilon.resize(layers);
  res.isi_gradient.resize(layers);

  // Potential gradient dL/dv of the layer above the current bank. For the
  // output layer only the final potential enters the loss.
  std::vector<double> e_post(static_cast<std::size_t>(steps) * n_out, 0.0);
  res.epsilon[layers - 1].assign(e_post.size(), 0.0);
  for (int h = 0; h < n_out; ++h) {
    e_post[static_cast<std::size_t>(steps - 1) * n_out + h] = output_grad[h];
    res.epsilon[layers - 1][static_cast<std::size_t>(steps - 1) * n_out + h] =
        output_grad[h];
  }

  std::vector<double> acc;
  for (int b = layers - 2; b >= 0; --b) {
    const SynapseBank& bank = net.banks[b];
    const LayerTrace& pre = forward.layers[b];
    const int n_pre = pre.neurons();
    const int n_post = net.layer_sizes[b + 1];
    const std::vector<double>& heights = bank.heights();

    // acc(t) = sum_{k>t} beta^(k-1-t) e_post(k)
    acc.assign(static_cast<std::size_t>(steps) * n_post, 0.0);
    for (int t = steps - 2; t >= 0; --t) {
      const double* next_e = e_post.data() + static_cast<std::size_t>(t + 1) * n_post;
      const double* next_acc = acc.data() + static_cast<std::size_t>(t + 1) * n_post;
      double* cur = acc.data() + static_cast<std::size_t>(t) * n_post;
      for (int h = 0; h < n_post; ++h) cur[h] = next_e[h] + beta * next_acc[h];
    }

    std::vector<double>& grad = res.height_grads[b];
    grad.assign(heights.size(), 0.0);
    for (int t = 0; t < steps - 1; ++t) {
      auto fired = pre.spikes.row(t);
      const double* a = acc.data() + static_cast<std::size_t>(t) * n_post;
      for (int i = 0; i < n_pre; ++i) {
        if (!fired[i]) continue;
        if (gaussian) {
          const Isi isi = pre.isi(t, i);
          for (const Connection& c : bank.Outgoing(i)) {
            grad[c.weight] += bank.Factor(c, isi) * a[c.post];
          }
        } else {
          for (const Connection& c : bank.Outgoing(i)) grad[c.weight] += a[c.post];
        }
      }
    }
    if (b == 0) break;

    // ISI gradient at spiking sites, then the surviving ISI term per site.
    std::vector<double>& isi_grad = res.isi_gradient[b];
    isi_grad.assign(static_cast<std::size_t>(steps) * n_pre, 0.0);
    std::vector<double> isi_term(isi_grad.size(), 0.0);
    for (int t = 0; t < steps; ++t) {
      auto fired = pre.spikes.row(t);
      const double* a = acc.data() + static_cast<std::size_t>(t) * n_post;
      for (int i = 0; i < n_pre; ++i) {
        if (!fired[i]) continue;
        ++res.spiking_sites;
        double g = 0.0;
        if (gaussian) {
          const Isi isi = pre.isi(t, i);
          for (const Connection& c : bank.Outgoing(i)) {
            const double d = static_cast<double>(isi) - bank.means()[c.shape];
            const double sigma = bank.widths()[c.shape];
            const double weight = heights[c.weight] * bank.Factor(c, isi);
            g += -d * weight / (sigma * sigma) * a[c.post];
          }
        }
        const std::size_t idx = static_cast<std::size_t>(t) * n_pre + i;
        isi_grad[idx] = g;
        if (!gaussian) continue;
        if (IsiTermPasses(mode, g)) {
          isi_term[idx] = g;
        } else {
          ++res.suppressed_sites;
        }
      }
    }

    // epsilon(t) = sum_h theta_jh(t) acc_h(t) - isi(t) * isi_term(next spike)
    std::vector<double>& eps = res.epsilon[b];
    eps.assign(static_cast<std::size_t>(steps) * n_pre, 0.0);
    for (int i = 0; i < n_pre; ++i) {
      int next_spike = -1;
      for (int t = steps - 1; t >= 0; --t) {
        const double* a = acc.data() + static_cast<std::size_t>(t) * n_post;
        double value = 0.0;
        if (gaussian) {
          const Isi isi = pre.isi(t, i);
          for (const Connection& c : bank.Outgoing(i)) {
            value += heights[c.weight] * bank.Factor(c, isi) * a[c.post];
          }
          if (next_spike >= 0) {
            value -= static_cast<double>(isi) *
                     isi_term[static_cast<std::size_t>(next_spike) * n_pre + i];
          }
        } else {
          for (const Connection& c : bank.Outgoing(i)) {
            value += heights[c.weight] * a[c.post];
          }
        }
        eps[static_cast<std::size_t>(t) * n_pre + i] = value;
        if (pre.spikes.at(t, i)) next_spike = t;
      }
    }

    e_post.assign(eps.size(), 0.0);
    for (std::size_t idx = 0; idx < eps.size(); ++idx) {
      e_post[idx] = eps[idx] * SurrogateSpikeDerivative(
                                   pre.potentials[idx], neuron.threshold,
                                   config.surrogate_slope);
    }
  }
  return res;
}

double PotentialDerivative(const Network& net, const ForwardResult& forward,
                           std::span<const double> isi_gradient_j,
                           int downstream, int j, int h, int t, int k,
                           const NeuronParams& neuron, SuppressionMode mode) {
  if (downstream < 1 || downstream >= net.num_layers()) {
    throw Error(ErrorKind::kValidation, "potential derivative: bad layer index");
  }
  const LayerTrace& pre = forward.layers[downstream - 1];
  const int steps = pre.steps();
  if (t < 0 || k <= t || k >= steps || j < 0 || j >= pre.neurons() || h < 0 ||
      h >= net.layer_sizes[downstream]) {
    throw Error(ErrorKind::kValidation,
                "potential derivative: index outside the trace (t=" +
                    std::to_string(t) + ", k=" + std::to_string(k) + ")");
  }
  const SynapseBank& bank = net.banks[downstream - 1];
  const Connection* link = nullptr;
  for (const Connection& c : bank.Outgoing(j)) {
    if (c.post == h) {
      link = &c;
      break;
    }
  }
  if (link == nullptr) return 0.0;

  const bool gaussian = UsesGaussianSynapses(net.variant);
  const GaussianSynapse syn = bank.Synapse(*link);
  const double direct =
      gaussian ? SynapseWeight(syn, pre.isi(t, j)) : syn.height;
  double value = std::pow(neuron.beta, k - 1 - t) * direct;
  if (!gaussian) return value;

  std::vector<std::uint8_t> between;
  for (int m = t + 1; m <= k - 1; ++m) {
    if (pre.spikes.at(m, j)) {
      const double grad_phi =
          isi_gradient_j[static_cast<std::size_t>(m) * pre.neurons() + j];
      value += std::pow(neuron.beta, k - 1 - m) *
               DthetaDphi(syn, pre.isi(m, j), grad_phi, mode) *
               DphiDs(pre.isi(t, j), between);
    }
    between.push_back(pre.spikes.at(m, j) ? 1 : 0);
  }
  return value;
}

}  // namespace imsnn
