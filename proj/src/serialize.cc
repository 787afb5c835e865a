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


#include "imsnn/serialize.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "imsnn/dataio.h"
#include "imsnn/errors.h"
#include "json.hpp"

namespace imsnn {
using nlohmann::json;

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error(ErrorKind::kInternal, "to_chars failed");
  return std::string(buf, ptr);
}

std::string ModelToJson(const Network& net) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["architecture"] = net.architecture;
  doc["variant"] = VariantName(net.variant);
  json layers = json::array();
  for (const SynapseBank& bank : net.banks) {
    layers.push_back({{"kind", LayerKindName(bank.kind())},
                      {"heights", bank.heights()},
                      {"means", bank.means()},
                      {"widths", bank.widths()}});
  }
  doc["layers"] = std::move(layers);
  return doc.dump(1);
}

Network ModelFromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("model JSON: ") + e.what());
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(ErrorKind::kParse, "model format_version " + std::to_string(version) +
                                         " is not supported (expected " +
                                         std::to_string(kModelFormatVersion) + ")");
    }
    Network net = BuildNetwork(doc.at("architecture").get<std::string>(),
                               ParseVariant(doc.at("variant").get<std::string>()));
    const json& layers = doc.at("layers");
    if (layers.size() != net.banks.size()) {
      throw Error(ErrorKind::kParse, "model has " + std::to_string(layers.size()) +
                                         " layers, architecture needs " +
                                         std::to_string(net.banks.size()));
    }
    for (std::size_t b = 0; b < net.banks.size(); ++b) {
      SynapseBank& bank = net.banks[b];
      const json& layer = layers[b];
      const auto heights = layer.at("heights").get<std::vector<double>>();
      const auto means = layer.at("means").get<std::vector<double>>();
      const auto widths = layer.at("widths").get<std::vector<double>>();
      if (heights.size() != bank.heights().size() || means.size() != bank.means().size() ||
          widths.size() != bank.widths().size()) {
        throw Error(ErrorKind::kParse, "layer " + std::to_string(b) +
                                           " array sizes do not match the architecture");
      }
      bank.heights() = heights;
      for (std::size_t s = 0; s < means.size(); ++s) {
        if (!(widths[s] > 0.0)) {
          throw Error(ErrorKind::kParse, "layer " + std::to_string(b) +
                                             " has a nonpositive width");
        }
        bank.SetShape(static_cast<int>(s), means[s], widths[s]);
      }
    }
    return net;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("model JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParse) throw;
    throw Error(ErrorKind::kParse, std::string("model JSON: ") + e.what());
  }
}

void SaveModel(const Network& net, const std::filesystem::path& path) {
  const std::string text = ModelToJson(net);
  WriteFileAtomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                  text.size()));
}

Network LoadModel(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  return ModelFromJson(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                        bytes.size()));
}

std::string BackwardToJson(const BackwardResult& result, int steps) {
  auto by_step = [steps](const std::vector<double>& flat) {
    json rows = json::array();
    if (flat.empty() || steps <= 0) return rows;
    const std::size_t n = flat.size() / static_cast<std::size_t>(steps);
    for (int t = 0; t < steps; ++t) {
      rows.push_back(std::vector<double>(flat.begin() + t * n, flat.begin() + (t + 1) * n));
    }
    return rows;
  };
  json doc;
  doc["spiking_sites"] = result.spiking_sites;
  doc["suppressed_sites"] = result.suppressed_sites;
  json layers = json::array();
  for (std::size_t l = 0; l < result.epsilon.size(); ++l) {
    json layer;
    layer["layer"] = l;
    layer["epsilon"] = by_step(result.epsilon[l]);
    layer["isi_gradient"] = by_step(result.isi_gradient[l]);
    layers.push_back(std::move(layer));
  }
  doc["layers"] = std::move(layers);
  json grads = json::array();
  for (const auto& g : result.height_grads) grads.push_back(g);
  doc["height_grads"] = std::move(grads);
  return doc.dump(1);
}

}  // namespace imsnn
