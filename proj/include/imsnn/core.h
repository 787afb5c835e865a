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


#ifndef IMSNN_CORE_H_
#define IMSNN_CORE_H_

#include <cstdint>
#include <span>
#include <vector>

namespace imsnn {

// Interspike interval, counted in simulation steps.
using Isi = std::int32_t;

// Lower bound applied to each output potential before normalization.
inline constexpr double kProbabilityGuard = 1e-12;

// A synapse whose effective weight is a Gaussian of the presynaptic ISI.
// Only `height` is trained; `mean` and `width` are fixed at initialization.
struct GaussianSynapse {
  double height = 0.0;
  double mean = 1.0;   // steps
  double width = 1.0;  // steps, > 0
};

// ISI counter update: restarts at 1 on the step after a spike.
constexpr Isi IsiUpdate(Isi isi, bool spiked) {
  return 1 + (spiked ? 0 : isi);
}

// exp(-(isi - mean)^2 / (2 width^2)). Also the derivative of the effective
// weight with respect to the height.
double GaussianFactor(double mean, double width, Isi isi);

// height * GaussianFactor(...). |result| <= |height|.
double SynapseWeight(const GaussianSynapse& synapse, Isi isi);

struct MembraneStepResult {
  double potential = 0.0;  // post-reset value carried to the next step
  bool spike = false;
};

// One leaky integrate-and-fire step. The candidate potential beta*v + inflow
// spikes when it reaches `threshold` (>=) and is then hard reset to 0. With
// `can_spike` false the neuron only accumulates (output layer).
MembraneStepResult MembraneStep(double potential, double beta, double inflow,
                                double threshold, bool can_spike = true);

// p_j = v_j / sum_h v_h after clamping every v_j to at least
// kProbabilityGuard. Throws Error(kDegenerateOutput) if no potential is
// positive, or kValidation on an empty vector.
std::vector<double> OutputProbabilities(std::span<const double> potentials);

}  // namespace imsnn

#endif  // IMSNN_CORE_H_
