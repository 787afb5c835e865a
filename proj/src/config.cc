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


#include "imsnn/config.h"

#include <fstream>
#include <set>

#include "imsnn/errors.h"

namespace imsnn {
using nlohmann::json;

namespace {

const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = {
      "dataset", "architecture", "variant", "encoder", "T", "dt", "beta", "theta",
      "surrogate_slope", "lr", "epochs", "batch_size", "seed", "limit", "test_limit",
      "cache_dir", "output_dir", "threads", "offline"};
  return keys;
}

const std::set<std::string>& EncoderKeys() {
  static const std::set<std::string> keys = {"scheme", "rate_min", "rate_max", "seed"};
  return keys;
}

template <typename T>
T Get(const json& doc, const std::string& key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::kConfig, "config key '" + key + "' has the wrong type");
  }
}

std::uint64_t GetSeed(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw Error(ErrorKind::kConfig, "config key '" + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

RunConfig RunConfigFromJson(const json& input) {
  if (!input.is_object()) throw Error(ErrorKind::kConfig, "config must be a JSON object");
  const json& doc = input.contains("config") ? input.at("config") : input;
  if (!doc.is_object()) throw Error(ErrorKind::kConfig, "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!KnownKeys().count(key)) {
      throw Error(ErrorKind::kConfig, "unknown config key '" + key + "'");
    }
  }
  RunConfig c;
  if (doc.contains("dataset")) c.dataset = Get<std::string>(doc, "dataset");
  if (doc.contains("architecture")) c.architecture = Get<std::string>(doc, "architecture");
  if (doc.contains("variant")) c.variant = ParseVariant(Get<std::string>(doc, "variant"));
  if (doc.contains("encoder")) {
    const json& enc = doc.at("encoder");
    if (!enc.is_object()) throw Error(ErrorKind::kConfig, "'encoder' must be an object");
    for (const auto& [key, value] : enc.items()) {
      if (!EncoderKeys().count(key)) {
        throw Error(ErrorKind::kConfig, "unknown encoder key '" + key + "'");
      }
    }
    if (enc.contains("scheme")) c.encoder.scheme = ParseEncoderScheme(Get<std::string>(enc, "scheme"));
    if (enc.contains("rate_min")) c.encoder.rate_min_hz = Get<double>(enc, "rate_min");
    if (enc.contains("rate_max")) c.encoder.rate_max_hz = Get<double>(enc, "rate_max");
    if (enc.contains("seed")) c.encoder.seed = GetSeed(enc, "seed");
  }
  if (doc.contains("T")) c.encoder.steps = Get<int>(doc, "T");
  if (doc.contains("dt")) c.encoder.dt_ms = Get<double>(doc, "dt");
  if (doc.contains("beta")) c.beta = Get<double>(doc, "beta");
  if (doc.contains("theta")) c.theta = Get<double>(doc, "theta");
  if (doc.contains("surrogate_slope")) c.surrogate_slope = Get<double>(doc, "surrogate_slope");
  if (doc.contains("lr")) c.lr = Get<double>(doc, "lr");
  if (doc.contains("epochs")) c.epochs = Get<int>(doc, "epochs");
  if (doc.contains("batch_size")) c.batch_size = Get<int>(doc, "batch_size");
  if (doc.contains("seed")) c.seed = GetSeed(doc, "seed");
  if (doc.contains("limit") && !doc.at("limit").is_null()) c.limit = GetSeed(doc, "limit");
  if (doc.contains("test_limit") && !doc.at("test_limit").is_null()) {
    c.test_limit = GetSeed(doc, "test_limit");
  }
  if (doc.contains("cache_dir")) c.cache_dir = Get<std::string>(doc, "cache_dir");
  if (doc.contains("output_dir")) c.output_dir = Get<std::string>(doc, "output_dir");
  if (doc.contains("threads")) c.threads = Get<int>(doc, "threads");
  if (doc.contains("offline")) c.offline = Get<bool>(doc, "offline");
  ValidateRunConfig(c);
  return c;
}

json RunConfigToJson(const RunConfig& c) {
  json doc;
  doc["dataset"] = c.dataset;
  doc["architecture"] = c.architecture;
  doc["variant"] = VariantName(c.variant);
  doc["encoder"] = {{"scheme", EncoderSchemeName(c.encoder.scheme)},
                    {"rate_min", c.encoder.rate_min_hz},
                    {"rate_max", c.encoder.rate_max_hz},
                    {"seed", c.encoder.seed}};
  doc["T"] = c.encoder.steps;
  doc["dt"] = c.encoder.dt_ms;
  doc["beta"] = c.beta;
  doc["theta"] = c.theta;
  doc["surrogate_slope"] = c.surrogate_slope;
  doc["lr"] = c.lr;
  doc["epochs"] = c.epochs;
  doc["batch_size"] = c.batch_size;
  doc["seed"] = c.seed;
  doc["limit"] = c.limit ? json(*c.limit) : json(nullptr);
  doc["test_limit"] = c.test_limit ? json(*c.test_limit) : json(nullptr);
  doc["cache_dir"] = c.cache_dir;
  doc["output_dir"] = c.output_dir;
  doc["threads"] = c.threads;
  doc["offline"] = c.offline;
  return doc;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, "config file " + path.string() + " is not valid JSON: " +
                                        e.what());
  }
  return RunConfigFromJson(doc);
}

void ValidateRunConfig(const RunConfig& c) {
  if (c.dataset != "mnist" && c.dataset != "fashion_mnist") {
    throw Error(ErrorKind::kConfig, "dataset must be mnist or fashion_mnist");
  }
  try {
    ParseArchitecture(c.architecture);
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfig, e.what());
  }
  ValidateEncoderConfig(c.encoder);
  if (!(c.beta > 0.0 && c.beta <= 1.0)) throw Error(ErrorKind::kConfig, "beta must lie in (0, 1]");
  if (!(c.theta > 0.0)) throw Error(ErrorKind::kConfig, "theta must be positive");
  if (!(c.surrogate_slope > 0.0)) throw Error(ErrorKind::kConfig, "surrogate_slope must be positive");
  if (!(c.lr >= 0.0)) throw Error(ErrorKind::kConfig, "lr must be nonnegative");
  if (c.epochs < 1) throw Error(ErrorKind::kConfig, "epochs must be >= 1");
  if (c.batch_size < 1) throw Error(ErrorKind::kConfig, "batch_size must be >= 1");
  if (c.threads < 1) throw Error(ErrorKind::kConfig, "threads must be >= 1");
  if (c.limit && *c.limit == 0) throw Error(ErrorKind::kConfig, "limit must be >= 1");
  if (c.test_limit && *c.test_limit == 0) throw Error(ErrorKind::kConfig, "test_limit must be >= 1");
}

TrainConfig ToTrainConfig(const RunConfig& c) {
  TrainConfig t;
  t.epochs = c.epochs;
  t.batch_size = c.batch_size;
  t.neuron.beta = c.beta;
  t.neuron.threshold = c.theta;
  t.encoder = c.encoder;
  t.adam.lr = c.lr;
  t.surrogate_slope = c.surrogate_slope;
  t.seed = c.seed;
  t.threads = c.threads;
  return t;
}

}  // namespace imsnn
