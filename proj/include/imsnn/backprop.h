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


#ifndef IMSNN_BACKPROP_H_
#define IMSNN_BACKPROP_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "imsnn/core.h"
#include "imsnn/network.h"

namespace imsnn {

// Which sign of the ISI gradient switches off the dtheta/dphi factor.
//   kImsnn:  zeroed where grad_phi >= 0 (updates never lower ISIs)
//   kImsnnC: zeroed where grad_phi < 0 (ablation)
//   kNone:   never zeroed
enum class SuppressionMode { kImsnn, kImsnnC, kNone };

const char* SuppressionModeName(SuppressionMode mode);
SuppressionMode ParseSuppressionMode(std::string_view name);

// Mode used when training a given variant. snn has no ISI path, so kNone.
SuppressionMode ModeForVariant(Variant variant);

// True if the ISI term survives for an ISI gradient of this value.
constexpr bool IsiTermPasses(SuppressionMode mode, double isi_gradient) {
  switch (mode) {
    case SuppressionMode::kImsnn:
      return isi_gradient < 0.0;
    case SuppressionMode::kImsnnC:
      return isi_gradient >= 0.0;
    case SuppressionMode::kNone:
      return true;
  }
  return true;
}

// Fast-sigmoid surrogate for ds/dv: 1 / (1 + slope |v - threshold|)^2.
double SurrogateSpikeDerivative(double potential, double threshold,
                                double slope);

// d(effective weight)/d(height) = GaussianFactor.
double DthetaDw(const GaussianSynapse& synapse, Isi isi);

// d(effective weight)/d(ISI) = -(isi - mean) * weight / width^2, or 0 when
// `mode` suppresses it for this ISI gradient.
double DthetaDphi(const GaussianSynapse& synapse, Isi isi, double isi_gradient,
                  SuppressionMode mode);

// Unsuppressed d(effective weight)/d(ISI).
double DthetaDphiBase(const GaussianSynapse& synapse, Isi isi);

// dphi(m)/ds(t) from unrolling the ISI recursion: -isi_at_t times the product
// of (1 - s(k)) over the spikes strictly between t and m. `between` holds
// s(t+1) .. s(m-1); an empty span gives -isi_at_t.
double DphiDs(Isi isi_at_t, std::span<const std::uint8_t> between);

struct BackwardConfig {
  double surrogate_slope = 10.0;
  SuppressionMode mode = SuppressionMode::kImsnn;
};

// Per-sample gradients and intermediate tensors. Tensors are steps x neurons
// row-major, indexed by neuron layer; they are empty for layers that do not
// have them (input layer everywhere, output layer for isi_gradient).
struct BackwardResult {
  std::vector<std::vector<double>> height_grads;  // per bank, heights layout
  std::vector<std::vector<double>> epsilon;       // dL/ds; output: dL/dv at the last step
  std::vector<std::vector<double>> isi_gradient;  // dL/dphi at spiking steps
  std::int64_t spiking_sites = 0;    // (neuron, step) spikes in layers with a downstream bank
  std::int64_t suppressed_sites = 0;  // of those, where the ISI term was zeroed
};

// Reverse-time BPTT for the given output gradient dL/dv(T). Reset is excluded
// from the gradient path. The ISI gradient of a spiking site is computed
// before its dtheta/dphi factor is (possibly) suppressed.
BackwardResult Backward(const Network& net, const ForwardResult& forward,
                        std::span<const double> output_grad,
                        const NeuronParams& neuron,
                        const BackwardConfig& config);

// Literal nested-sum potential derivative dv_h(k)/ds_j(t) for the bank
// feeding `downstream` (layer of h), evaluated from traces. Needs the ISI
// gradient of layer j at each intermediate spike to decide suppression.
// Throws Error(kValidation) for indices outside the trace or k <= t.
double PotentialDerivative(const Network& net, const ForwardResult& forward,
                           std::span<const double> isi_gradient_j,
                           int downstream, int j, int h, int t, int k,
                           const NeuronParams& neuron, SuppressionMode mode);

}  // namespace imsnn

#endif  // IMSNN_BACKPROP_H_
