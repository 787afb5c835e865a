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


#include "imsnn/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "imsnn/errors.h"

namespace imsnn {
namespace {

// Samples are reduced in fixed chunks so the summation order does not depend
// on the thread count.
constexpr std::size_t kChunk = 8;

template <typename Fn>
void ForEachChunk(std::size_t chunks, int threads, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(chunks, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) fn(c);
    });
  }
  for (auto& t : pool) t.join();
}

EncoderConfig SampleEncoder(const EncoderConfig& base, std::size_t index) {
  EncoderConfig cfg = base;
  cfg.seed = base.seed + index;
  return cfg;
}

int Predict(std::span<const double> potentials) {
  const auto it = std::max_element(potentials.begin(), potentials.end());
  return static_cast<int>(it - potentials.begin());
}

// Per-chunk tallies, merged in chunk order.
struct Tally {
  std::int64_t samples = 0;
  std::int64_t correct = 0;
  std::int64_t degenerate = 0;
  double loss = 0.0;
  std::vector<std::int64_t> spikes;
  std::int64_t spiking_sites = 0;
  std::int64_t suppressed_sites = 0;
  std::vector<std::vector<double>> grads;

  void Merge(const Tally& o) {
    samples += o.samples;
    correct += o.correct;
    degenerate += o.degenerate;
    loss += o.loss;
    for (std::size_t l = 0; l < spikes.size(); ++l) spikes[l] += o.spikes[l];
    spiking_sites += o.spiking_sites;
    suppressed_sites += o.suppressed_sites;
    for (std::size_t b = 0; b < grads.size(); ++b) {
      for (std::size_t k = 0; k < grads[b].size(); ++k) grads[b][k] += o.grads[b][k];
    }
  }
};

Tally NewTally(const Network& net, bool with_grads) {
  Tally t;
  t.spikes.assign(std::max(0, net.hidden_layers()), 0);
  if (with_grads) {
    for (const SynapseBank& bank : net.banks) t.grads.emplace_back(bank.heights().size(), 0.0);
  }
  return t;
}

// Forward (and optionally backward) of one sample into `tally`.
void RunSample(const Network& net, const Dataset& data, std::size_t index,
               const TrainConfig& cfg, bool train, Tally& tally) {
  const std::vector<double> pixels = data.Image(index);
  const SpikeRaster input = Encode(pixels, SampleEncoder(cfg.encoder, index));
  const ForwardResult fwd = ForwardPass(net, input, cfg.neuron);
  ++tally.samples;
  for (int l = 1; l <= net.hidden_layers(); ++l) {
    tally.spikes[l - 1] += fwd.layers[l].spikes.Count();
  }
  LossResult loss;
  try {
    loss = CrossEntropy(fwd.output, data.Label(index));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kDegenerateOutput) throw;
    ++tally.degenerate;
    return;
  }
  if (Predict(fwd.output) == data.Label(index)) ++tally.correct;
  tally.loss += loss.loss;
  if (!train) return;
  BackwardConfig bcfg;
  bcfg.surrogate_slope = cfg.surrogate_slope;
  bcfg.mode = ModeForVariant(net.variant);
  const BackwardResult back = Backward(net, fwd, loss.grad, cfg.neuron, bcfg);
  tally.spiking_sites += back.spiking_sites;
  tally.suppressed_sites += back.suppressed_sites;
  for (std::size_t b = 0; b < tally.grads.size(); ++b) {
    const auto& g = back.height_grads[b];
    auto& acc = tally.grads[b];
    for (std::size_t k = 0; k < g.size(); ++k) acc[k] += g[k];
  }
}

// Runs samples order[begin, end) in fixed chunks and merges in order.
Tally RunRange(const Network& net, const Dataset& data,
               const std::vector<std::size_t>& order, std::size_t begin,
               std::size_t end, const TrainConfig& cfg, bool train) {
  const std::size_t n = end - begin;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Tally> parts(chunks, NewTally(net, train));
  ForEachChunk(chunks, cfg.threads, [&](std::size_t c) {
    const std::size_t lo = begin + c * kChunk;
    const std::size_t hi = std::min(end, lo + kChunk);
    for (std::size_t i = lo; i < hi; ++i) RunSample(net, data, order[i], cfg, train, parts[c]);
  });
  Tally total = NewTally(net, train);
  for (const Tally& p : parts) total.Merge(p);
  return total;
}

MetricsRecord ToRecord(const Network& net, const Tally& t, int epoch,
                       const char* split) {
  MetricsRecord r;
  r.epoch = epoch;
  r.split = split;
  r.samples = t.samples;
  r.degenerate = t.degenerate;
  r.accuracy = t.samples ? 100.0 * static_cast<double>(t.correct) / t.samples : 0.0;
  const std::int64_t trainable = t.samples - t.degenerate;
  r.loss = trainable ? t.loss / static_cast<double>(trainable) : 0.0;
  for (int l = 1; l <= net.hidden_layers(); ++l) {
    const double k = SpikesPerNeuron(t.spikes[l - 1], net.layer_sizes[l], t.samples);
    r.layer_spikes.push_back(k);
    r.network_spikes += k;
  }
  r.suppressed_fraction =
      t.spiking_sites ? static_cast<double>(t.suppressed_sites) / t.spiking_sites : 0.0;
  return r;
}

}  // namespace

LossResult CrossEntropy(std::span<const double> potentials, int label) {
  if (label < 0 || label >= static_cast<int>(potentials.size())) {
    throw Error(ErrorKind::kValidation,
                "label " + std::to_string(label) + " outside the output layer");
  }
  LossResult r;
  r.probabilities = OutputProbabilities(potentials);
  r.loss = -std::log(r.probabilities[label]);
  double total = 0.0;
  for (double v : potentials) total += std::max(v, kProbabilityGuard);
  const double clamped_label = std::max(potentials[label], kProbabilityGuard);
  r.grad.assign(potentials.size(), 0.0);
  for (std::size_t j = 0; j < potentials.size(); ++j) {
    if (!(potentials[j] > kProbabilityGuard)) continue;
    r.grad[j] = 1.0 / total;
    if (static_cast<int>(j) == label) r.grad[j] -= 1.0 / clamped_label;
  }
  return r;
}

AdamState AdamState::For(const Network& net) {
  AdamState s;
  for (const SynapseBank& bank : net.banks) {
    s.m.emplace_back(bank.heights().size(), 0.0);
    s.v.emplace_back(bank.heights().size(), 0.0);
  }
  return s;
}

void AdamStep(std::span<double> params, std::span<const double> grads,
              std::span<double> m, std::span<double> v, std::int64_t t,
              const AdamConfig& config) {
  if (params.size() != grads.size() || m.size() != params.size() ||
      v.size() != params.size()) {
    throw Error(ErrorKind::kValidation, "adam: parameter and state shapes differ");
  }
  if (t < 1) throw Error(ErrorKind::kValidation, "adam: step must be >= 1");
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * g;
    v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * g * g;
    const double m_hat = m[k] / c1;
    const double v_hat = v[k] / c2;
    params[k] -= config.lr * m_hat / (std::sqrt(v_hat) + config.eps);
  }
}

void AdamStep(Network& net, const std::vector<std::vector<double>>& grads,
              AdamState& state, const AdamConfig& config) {
  if (grads.size() != net.banks.size() || state.m.size() != net.banks.size()) {
    throw Error(ErrorKind::kValidation, "adam: gradient list does not match the network");
  }
  ++state.step;
  for (std::size_t b = 0; b < net.banks.size(); ++b) {
    AdamStep(net.banks[b].heights(), grads[b], state.m[b], state.v[b], state.step, config);
  }
}

double SpikesPerNeuron(std::int64_t total_spikes, std::int64_t neurons,
                       std::int64_t samples) {
  if (neurons <= 0 || samples <= 0) return 0.0;
  return static_cast<double>(total_spikes) /
         (static_cast<double>(neurons) * static_cast<double>(samples));
}

MetricsRecord Evaluate(const Network& net, const Dataset& data,
                       const TrainConfig& config) {
  if (data.size() == 0) throw Error(ErrorKind::kValidation, "evaluation dataset is empty");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const Tally t = RunRange(net, data, order, 0, order.size(), config, false);
  return ToRecord(net, t, 0, SplitName(data.split));
}

std::vector<MetricsRecord> Train(Network& net, const Dataset& train,
                                 const Dataset* test, const TrainConfig& config,
                                 const MetricsCallback& sink) {
  if (train.size() == 0) throw Error(ErrorKind::kValidation, "training dataset is empty");
  if (config.epochs < 1 || config.batch_size < 1) {
    throw Error(ErrorKind::kConfig, "epochs and batch size must be positive");
  }
  std::mt19937_64 rng(config.seed);
  AdamState adam = AdamState::For(net);
  std::vector<std::size_t> order(train.size());
  std::vector<MetricsRecord> records;
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    Tally epoch_tally = NewTally(net, false);
    for (std::size_t lo = 0; lo < order.size(); lo += batch) {
      const std::size_t hi = std::min(order.size(), lo + batch);
      Tally t = RunRange(net, train, order, lo, hi, config, true);
      const std::int64_t trainable = t.samples - t.degenerate;
      if (trainable > 0) {
        const double scale = 1.0 / static_cast<double>(trainable);
        for (auto& g : t.grads) {
          for (double& x : g) x *= scale;
        }
        AdamStep(net, t.grads, adam, config.adam);
      }
      t.grads.clear();
      epoch_tally.grads.clear();
      epoch_tally.Merge(t);
    }
    if (epoch_tally.samples == epoch_tally.degenerate) {
      throw Error(ErrorKind::kDegenerateRun,
                  "epoch " + std::to_string(epoch) +
                      " had no trainable sample (all output potentials nonpositive)");
    }
    records.push_back(ToRecord(net, epoch_tally, epoch, "train"));
    if (sink) sink(records.back());
    if (test != nullptr) {
      MetricsRecord r = Evaluate(net, *test, config);
      r.epoch = epoch;
      r.split = "test";
      records.push_back(r);
      if (sink) sink(records.back());
    }
  }
  return records;
}

}  // namespace imsnn
