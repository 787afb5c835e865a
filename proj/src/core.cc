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


#include "imsnn/core.h"

#include <algorithm>
#include <cmath>

#include "imsnn/errors.h"

namespace imsnn {

double GaussianFactor(double mean, double width, Isi isi) {
  const double d = static_cast<double>(isi) - mean;
  return std::exp(-(d * d) / (2.0 * width * width));
}

double SynapseWeight(const GaussianSynapse& synapse, Isi isi) {
  return synapse.height * GaussianFactor(synapse.mean, synapse.width, isi);
}

MembraneStepResult MembraneStep(double potential, double beta, double inflow,
                                double threshold, bool can_spike) {
  const double candidate = beta * potential + inflow;
  if (can_spike && candidate >= threshold) return {0.0, true};
  return {candidate, false};
}

std::vector<double> OutputProbabilities(std::span<const double> potentials) {
  if (potentials.empty()) {
    throw Error(ErrorKind::kValidation, "output potentials are empty");
  }
  if (std::none_of(potentials.begin(), potentials.end(),
                   [](double v) { return v > 0.0; })) {
    throw Error(ErrorKind::kDegenerateOutput,
                "all output potentials are nonpositive");
  }
  std::vector<double> p(potentials.size());
  double total = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    p[j] = std::max(potentials[j], kProbabilityGuard);
    total += p[j];
  }
  for (double& x : p) x /= total;
  return p;
}

}  // namespace imsnn
