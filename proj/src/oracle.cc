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


#include "imsnn/oracle.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "imsnn/errors.h"
#include "imsnn/training.h"
#include "json.hpp"

namespace imsnn {
namespace {

std::size_t At(int t, int n, int width) {
  return static_cast<std::size_t>(t) * width + n;
}

// Loss of a forward pass, or nullopt for a degenerate output.
struct FdSample {
  std::optional<double> loss;
  ForwardResult forward;
  std::vector<bool> clamped;
};

FdSample RunLoss(const Network& net, const SpikeRaster& input, int label,
                 const NeuronParams& neuron) {
  FdSample s;
  s.forward = ForwardPass(net, input, neuron);
  for (double v : s.forward.output) s.clamped.push_back(!(v > kProbabilityGuard));
  try {
    s.loss = CrossEntropy(s.forward.output, label).loss;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kDegenerateOutput) throw;
  }
  return s;
}

bool SameSpikes(const ForwardResult& a, const ForwardResult& b) {
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    if (!(a.layers[l].spikes == b.layers[l].spikes)) return false;
  }
  return true;
}

}  // namespace

BackwardResult DirectSumBackward(const Network& net,
                                 const ForwardResult& forward,
                                 std::span<const double> output_grad,
                                 const NeuronParams& neuron,
                                 const BackwardConfig& config) {
  const int layers = net.num_layers();
  const int steps = forward.steps();
  int non_input = 0;
  for (int l = 1; l < layers; ++l) non_input += net.layer_sizes[l];
  if (non_input > kOracleMaxNeurons || steps > kOracleMaxSteps) {
    throw Error(ErrorKind::kGuard,
                "direct-sum oracle is limited to " + std::to_string(kOracleMaxNeurons) +
                    " non-input neurons and " + std::to_string(kOracleMaxSteps) +
                    " steps (got " + std::to_string(non_input) + " and " +
                    std::to_string(steps) + ")");
  }
  const int n_out = net.layer_sizes.back();
  if (static_cast<int>(output_grad.size()) != n_out) {
    throw Error(ErrorKind::kValidation, "oracle: output gradient has the wrong size");
  }
  const bool gaussian = UsesGaussianSynapses(net.variant);
  const SuppressionMode mode = gaussian ? config.mode : SuppressionMode::kNone;
  const double beta = neuron.beta;

  BackwardResult res;
  res.height_grads.resize(net.banks.size());
  res.epsilon.resize(layers);
  res.isi_gradient.resize(layers);
  res.epsilon[layers - 1].assign(static_cast<std::size_t>(steps) * n_out, 0.0);
  for (int h = 0; h < n_out; ++h) {
    res.epsilon[layers - 1][At(steps - 1, h, n_out)] = output_grad[h];
  }

  for (int b = layers - 2; b >= 0; --b) {
    const int post_layer = b + 1;
    const int n_pre = net.layer_sizes[b];
    const int n_post = net.layer_sizes[post_layer];
    const SynapseBank& bank = net.banks[b];
    const LayerTrace& pre = forward.layers[b];
    const LayerTrace& post = forward.layers[post_layer];

    // dL/dv of the postsynaptic layer at each step.
    std::vector<double> down(static_cast<std::size_t>(steps) * n_post, 0.0);
    for (int k = 0; k < steps; ++k) {
      for (int h = 0; h < n_post; ++h) {
        const double eps = res.epsilon[post_layer][At(k, h, n_post)];
        const double surrogate =
            post_layer == net.output_layer()
                ? 1.0
                : SurrogateSpikeDerivative(post.potential(k, h), neuron.threshold,
                                           config.surrogate_slope);
        down[At(k, h, n_post)] = eps * surrogate;
      }
    }

    std::vector<double>& grad = res.height_grads[b];
    grad.assign(bank.heights().size(), 0.0);
    for (int i = 0; i < n_pre; ++i) {
      for (const Connection& c : bank.Outgoing(i)) {
        const GaussianSynapse syn = bank.Synapse(c);
        for (int k = 0; k < steps; ++k) {
          double inner = 0.0;
          for (int t = 0; t < k; ++t) {
            if (!pre.spikes.at(t, i)) continue;
            const double dw = gaussian ? DthetaDw(syn, pre.isi(t, i)) : 1.0;
            inner += std::pow(beta, k - 1 - t) * dw;
          }
          grad[c.weight] += down[At(k, c.post, n_post)] * inner;
        }
      }
    }
    if (b == 0) break;

    std::vector<double>& isi_grad = res.isi_gradient[b];
    isi_grad.assign(static_cast<std::size_t>(steps) * n_pre, 0.0);
    for (int t = 0; t < steps; ++t) {
      for (int i = 0; i < n_pre; ++i) {
        if (!pre.spikes.at(t, i)) continue;
        ++res.spiking_sites;
        double g = 0.0;
        if (gaussian) {
          for (const Connection& c : bank.Outgoing(i)) {
            const double dphi = DthetaDphiBase(bank.Synapse(c), pre.isi(t, i));
            for (int k = t + 1; k < steps; ++k) {
              g += down[At(k, c.post, n_post)] * std::pow(beta, k - 1 - t) * dphi;
            }
          }
          if (!IsiTermPasses(mode, g)) ++res.suppressed_sites;
        }
        isi_grad[At(t, i, n_pre)] = g;
      }
    }

    std::vector<double>& eps = res.epsilon[b];
    eps.assign(static_cast<std::size_t>(steps) * n_pre, 0.0);
    for (int t = 0; t < steps; ++t) {
      for (int j = 0; j < n_pre; ++j) {
        double value = 0.0;
        for (int h = 0; h < n_post; ++h) {
          for (int k = t + 1; k < steps; ++k) {
            value += down[At(k, h, n_post)] *
                     PotentialDerivative(net, forward, isi_grad, post_layer, j, h, t,
                                         k, neuron, mode);
          }
        }
        eps[At(t, j, n_pre)] = value;
      }
    }
  }
  return res;
}

GradCheckReport FdCheckLastLayer(const Network& net, const SpikeRaster& input,
                                 int label, const NeuronParams& neuron,
                                 const BackwardConfig& backward,
                                 const GradCheckOptions& options) {
  GradCheckReport report;
  report.step = options.step;
  report.tolerance = options.tolerance;
  report.scale_floor = options.scale_floor;
  if (options.step > 1e-5) {
    report.regime = "truncation-dominated";
  } else if (options.step < 1e-7) {
    report.regime = "roundoff-dominated";
  } else {
    report.regime = "ok";
  }

  const ForwardResult base = ForwardPass(net, input, neuron);
  const LossResult loss = CrossEntropy(base.output, label);
  const BackwardResult analytic = Backward(net, base, loss.grad, neuron, backward);

  const int last = static_cast<int>(net.banks.size()) - 1;
  const std::size_t count = net.banks[last].heights().size();
  std::vector<int> coords(count);
  std::iota(coords.begin(), coords.end(), 0);
  if (options.max_coords >= 0 && count > static_cast<std::size_t>(options.max_coords)) {
    std::mt19937_64 rng(options.seed);
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(options.max_coords);
    std::sort(coords.begin(), coords.end());
  }

  Network probe = net;
  std::vector<bool> base_clamped;
  for (double v : base.output) base_clamped.push_back(!(v > kProbabilityGuard));
  for (int index : coords) {
    GradCheckEntry e;
    e.bank = last;
    e.index = index;
    e.analytic = analytic.height_grads[last][index];
    double& h = probe.banks[last].heights()[index];
    const double original = h;
    h = original + options.step;
    const FdSample plus = RunLoss(probe, input, label, neuron);
    h = original - options.step;
    const FdSample minus = RunLoss(probe, input, label, neuron);
    h = original;
    e.valid = plus.loss && minus.loss && SameSpikes(plus.forward, base) &&
              SameSpikes(minus.forward, base) && plus.clamped == base_clamped &&
              minus.clamped == base_clamped;
    if (e.valid) {
      e.numeric = (*plus.loss - *minus.loss) / (2.0 * options.step);
      e.abs_error = std::abs(e.analytic - e.numeric);
      const double scale =
          std::max({std::abs(e.analytic), std::abs(e.numeric), options.scale_floor});
      e.rel_error = e.abs_error / scale;
      e.pass = e.rel_error < options.tolerance;
      ++report.valid_count;
      report.max_rel_error = std::max(report.max_rel_error, e.rel_error);
    } else {
      ++report.invalid_count;
    }
    report.entries.push_back(e);
  }
  report.passed = report.regime == "ok" && report.valid_count > 0 &&
                  std::all_of(report.entries.begin(), report.entries.end(),
                              [](const GradCheckEntry& e) { return !e.valid || e.pass; });
  return report;
}

std::string GradCheckReportToJson(const GradCheckReport& report) {
  nlohmann::json doc;
  doc["step"] = report.step;
  doc["tolerance"] = report.tolerance;
  doc["scale_floor"] = report.scale_floor;
  doc["regime"] = report.regime;
  doc["valid_count"] = report.valid_count;
  doc["invalid_count"] = report.invalid_count;
  doc["max_rel_error"] = report.max_rel_error;
  doc["passed"] = report.passed;
  nlohmann::json entries = nlohmann::json::array();
  for (const GradCheckEntry& e : report.entries) {
    entries.push_back({{"bank", e.bank},
                       {"index", e.index},
                       {"analytic", e.analytic},
                       {"numeric", e.numeric},
                       {"abs_error", e.abs_error},
                       {"rel_error", e.rel_error},
                       {"valid", e.valid},
                       {"pass", e.pass}});
  }
  doc["entries"] = std::move(entries);
  return doc.dump(1);
}

DemoResult DemoSingleNeuron(const NeuronParams& neuron) {
  constexpr int kSteps = 100;
  constexpr int kPeriod = 10;
  constexpr double kHeight = 0.6;
  DemoResult demo;
  demo.input = SpikeRaster(kSteps, 1);
  for (int t = kPeriod - 1; t < kSteps; t += kPeriod) demo.input.set(t, 0, true);

  auto run = [&](Variant variant, double mean, double* inflow) {
    Network net = BuildNetwork("1-1-1", variant);
    net.banks[0].heights()[0] = kHeight;
    net.banks[0].SetShape(0, mean, 5.0);
    net.banks[1].heights()[0] = 1.0;
    const ForwardResult fwd = ForwardPass(net, demo.input, neuron);
    if (inflow != nullptr) {
      const Connection& c = net.banks[0].Outgoing(0)[0];
      *inflow = EffectiveWeight(net.banks[0], c, fwd.layers[0].isi(kPeriod - 1, 0), variant);
    }
    return fwd.layers[1].spikes;
  };
  demo.conventional = run(Variant::kSnn, 10.0, nullptr);
  demo.matched = run(Variant::kImsnn, 10.0, &demo.matched_inflow);
  demo.shifted = run(Variant::kImsnn, 15.0, &demo.shifted_inflow);
  demo.identical = demo.conventional == demo.matched;
  demo.ordered = demo.matched.Count() > demo.shifted.Count();
  return demo;
}

void WriteRasterCsv(const std::filesystem::path& path, const SpikeRaster& raster) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << "timestep,neuron,spike\n";
  for (int t = 0; t < raster.steps(); ++t) {
    for (int n = 0; n < raster.neurons(); ++n) {
      out << t + 1 << ',' << n << ',' << (raster.at(t, n) ? 1 : 0) << '\n';
    }
  }
  if (!out) throw Error(ErrorKind::kIo, "short write to " + path.string());
}

}  // namespace imsnn
