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


#ifndef IMSNN_TESTS_FIXTURES_H_
#define IMSNN_TESTS_FIXTURES_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "imsnn/backprop.h"
#include "imsnn/dataio.h"
#include "imsnn/network.h"
#include "imsnn/raster.h"

namespace imsnn::testing {

// A small network with enough activity that every gradient path is used:
// strong heights, narrow Gaussians centred on short ISIs.
struct Instance {
  Network net;
  SpikeRaster input;
  ForwardResult forward;
  std::vector<double> output_grad;
};

inline InitConfig ActiveInit() {
  InitConfig init;
  init.height_mean = 0.35;
  init.height_std = 0.6;
  init.mean_lo = 1.0;
  init.mean_hi = 6.0;
  init.width_lo = 1.0;
  init.width_hi = 4.0;
  return init;
}

inline SpikeRaster RandomRaster(std::mt19937_64& rng, int steps, int neurons, double p) {
  SpikeRaster r(steps, neurons);
  std::bernoulli_distribution fire(p);
  for (int t = 0; t < steps; ++t) {
    for (int n = 0; n < neurons; ++n) r.set(t, n, fire(rng));
  }
  return r;
}

inline Instance MakeInstance(const std::string& arch, Variant variant, int steps,
                             std::uint64_t seed, double input_rate = 0.45) {
  Instance inst;
  inst.net = InitNetwork(arch, variant, seed, ActiveInit());
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  inst.input = RandomRaster(rng, steps, inst.net.layer_sizes.front(), input_rate);
  inst.forward = ForwardPass(inst.net, inst.input);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int h = 0; h < inst.net.layer_sizes.back(); ++h) inst.output_grad.push_back(g(rng));
  return inst;
}

// Largest absolute difference between two tensors of equal shape; infinity
// when the shapes differ.
inline double MaxAbsDiff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double MaxAbsDiff(const BackwardResult& a, const BackwardResult& b) {
  double m = 0.0;
  if (a.height_grads.size() != b.height_grads.size()) return INFINITY;
  for (std::size_t i = 0; i < a.height_grads.size(); ++i) {
    m = std::max(m, MaxAbsDiff(a.height_grads[i], b.height_grads[i]));
  }
  for (std::size_t i = 0; i < a.epsilon.size(); ++i) {
    m = std::max(m, MaxAbsDiff(a.epsilon[i], b.epsilon[i]));
    m = std::max(m, MaxAbsDiff(a.isi_gradient[i], b.isi_gradient[i]));
  }
  return m;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("imsnn-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Synthetic IDX pair with `count` images of rows x cols; labels cycle 0..9.
inline IdxTensor SyntheticImages(std::uint32_t count, std::uint32_t rows, std::uint32_t cols,
                                 std::uint64_t seed) {
  IdxTensor t;
  t.magic = kIdxMagicImages;
  t.dims = {count, rows, cols};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> px(0, 255);
  t.data.resize(static_cast<std::size_t>(count) * rows * cols);
  for (auto& b : t.data) b = static_cast<std::uint8_t>(px(rng));
  return t;
}

inline IdxTensor SyntheticLabels(std::uint32_t count) {
  IdxTensor t;
  t.magic = kIdxMagicLabels;
  t.dims = {count};
  for (std::uint32_t i = 0; i < count; ++i) t.data.push_back(static_cast<std::uint8_t>(i % 10));
  return t;
}

}  // namespace imsnn::testing

#endif  // IMSNN_TESTS_FIXTURES_H_
