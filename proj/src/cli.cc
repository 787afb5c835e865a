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


#include "imsnn/cli.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "imsnn/dataio.h"
#include "imsnn/errors.h"
#include "imsnn/oracle.h"
#include "imsnn/serialize.h"
#include "json.hpp"

#ifndef IMSNN_VERSION
#define IMSNN_VERSION "0.0.0"
#endif
#ifndef IMSNN_GIT_DESCRIBE
#define IMSNN_GIT_DESCRIBE "unknown"
#endif

namespace imsnn {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Flag values layered over the config file.
struct Overrides {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> limit;
  std::optional<std::size_t> test_limit;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<int> threads;
  std::string variant;
  std::string architecture;
  std::string dataset;
  bool offline = false;
};

void AddRunFlags(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config_path, "JSON run config");
  app.add_option("--out", o.out_dir, "Output directory");
  app.add_option("--seed", o.seed, "Run seed");
  app.add_option("--limit", o.limit, "Training subset size");
  app.add_option("--test-limit", o.test_limit, "Test subset size");
  app.add_option("--epochs", o.epochs, "Epoch count");
  app.add_option("--lr", o.lr, "Adam learning rate");
  app.add_option("--threads", o.threads, "Worker threads per batch");
  app.add_option("--variant", o.variant, "imsnn, snn or imsnn_c");
  app.add_option("--architecture", o.architecture, "Architecture string, e.g. 784-500-10");
  app.add_option("--dataset", o.dataset, "mnist or fashion_mnist");
  app.add_flag("--offline", o.offline, "Never touch the network; fail on cache miss");
}

RunConfig Resolve(const Overrides& o) {
  RunConfig c = o.config_path.empty() ? RunConfig{} : LoadRunConfig(o.config_path);
  if (!o.out_dir.empty()) c.output_dir = o.out_dir;
  if (o.seed) c.seed = *o.seed;
  if (o.limit) c.limit = *o.limit;
  if (o.test_limit) c.test_limit = *o.test_limit;
  if (o.epochs) c.epochs = *o.epochs;
  if (o.lr) c.lr = *o.lr;
  if (o.threads) c.threads = *o.threads;
  if (!o.variant.empty()) c.variant = ParseVariant(o.variant);
  if (!o.architecture.empty()) c.architecture = o.architecture;
  if (!o.dataset.empty()) c.dataset = o.dataset;
  if (o.offline) c.offline = true;
  ValidateRunConfig(c);
  return c;
}

Dataset Load(const RunConfig& c, Split split) {
  DataOptions opts;
  opts.cache_dir = c.cache_dir;
  opts.offline = c.offline;
  opts.limit = split == Split::kTrain ? c.limit : c.test_limit;
  return LoadDataset(c.dataset, split, opts);
}

json RecordToJson(const MetricsRecord& r) {
  return {{"epoch", r.epoch},
          {"split", r.split},
          {"accuracy", r.accuracy},
          {"layer_kappa_n", r.layer_spikes},
          {"network_kappa_n", r.network_spikes},
          {"loss", r.loss},
          {"suppressed_fraction", r.suppressed_fraction},
          {"samples", r.samples},
          {"degenerate", r.degenerate}};
}

std::string Describe(const MetricsRecord& r) {
  std::ostringstream os;
  os << "epoch " << r.epoch << " " << r.split << ": accuracy " << FormatDouble(r.accuracy)
     << "% kappa_n " << FormatDouble(r.network_spikes) << " loss " << FormatDouble(r.loss);
  if (r.split == "train") os << " suppressed " << FormatDouble(r.suppressed_fraction);
  if (r.degenerate) os << " degenerate " << r.degenerate;
  return os.str();
}

struct TrainedRun {
  Network net;
  std::vector<MetricsRecord> records;
  RunArtifacts artifacts;
};

TrainedRun TrainAndEmit(const RunConfig& c, const Dataset& train, const Dataset& test,
                        std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  TrainedRun run{InitNetwork(c.architecture, c.variant, c.seed), {}, {}};
  out << "training " << VariantName(c.variant) << " " << c.architecture << " on "
      << train.size() << " " << c.dataset << " samples\n";
  run.records = Train(run.net, train, &test, ToTrainConfig(c),
                      [&](const MetricsRecord& r) { out << Describe(r) << "\n" << std::flush; });
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  run.artifacts = EmitResults(run.records, c, run.net, c.output_dir, wall);
  return run;
}

const MetricsRecord* LastOf(const std::vector<MetricsRecord>& records, const std::string& split) {
  for (auto it = records.rbegin(); it != records.rend(); ++it) {
    if (it->split == split) return &*it;
  }
  return nullptr;
}

int CmdTrain(const Overrides& o, std::ostream& out) {
  const RunConfig c = Resolve(o);
  const Dataset train = Load(c, Split::kTrain);
  const Dataset test = Load(c, Split::kTest);
  const TrainedRun run = TrainAndEmit(c, train, test, out);
  out << "wrote " << run.artifacts.metrics_csv.string() << ", "
      << run.artifacts.summary_json.string() << ", " << run.artifacts.model_json.string()
      << "\n";
  return 0;
}

int CmdEval(const Overrides& o, const std::string& model_path, const std::string& split,
            std::ostream& out) {
  RunConfig c = Resolve(o);
  const Network net = LoadModel(model_path);
  c.architecture = net.architecture;
  c.variant = net.variant;
  const Dataset data = Load(c, ParseSplit(split));
  MetricsRecord r = Evaluate(net, data, ToTrainConfig(c));
  json doc = RecordToJson(r);
  doc["model"] = model_path;
  doc["dataset"] = c.dataset;
  out << doc.dump(1) << "\n";
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    const std::string text = doc.dump(1) + "\n";
    WriteFileAtomic(fs::path(o.out_dir) / "eval.json",
                    std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }
  return 0;
}

int CmdDemo(const Overrides& o, std::ostream& out) {
  const fs::path dir = o.out_dir.empty() ? fs::path("runs/demo") : fs::path(o.out_dir);
  fs::create_directories(dir);
  const DemoResult d = DemoSingleNeuron();
  WriteRasterCsv(dir / "input.csv", d.input);
  WriteRasterCsv(dir / "conventional.csv", d.conventional);
  WriteRasterCsv(dir / "gaussian_mu10.csv", d.matched);
  WriteRasterCsv(dir / "gaussian_mu15.csv", d.shifted);
  out << "conventional spikes: " << d.conventional.Count() << "\n"
      << "gaussian mu=10 spikes: " << d.matched.Count()
      << " (inflow per spike " << FormatDouble(d.matched_inflow) << ")\n"
      << "gaussian mu=15 spikes: " << d.shifted.Count()
      << " (inflow per spike " << FormatDouble(d.shifted_inflow) << ")\n"
      << "raster(conventional) == raster(mu=10): " << (d.identical ? "yes" : "no") << "\n"
      << "count(mu=10) > count(mu=15): " << (d.ordered ? "yes" : "no") << "\n"
      << "verdict: " << (d.passed() ? "PASS" : "FAIL") << "\n"
      << "rasters written to " << dir.string() << "\n";
  return d.passed() ? 0 : 1;
}

int CmdAblate(const Overrides& o, std::ostream& out) {
  RunConfig base = Resolve(o);
  const Dataset train = Load(base, Split::kTrain);
  const Dataset test = Load(base, Split::kTest);
  const fs::path root = base.output_dir;
  json table = json::array();
  std::vector<double> kappa;
  std::ostringstream csv;
  csv << "variant,test_accuracy,network_kappa_n,train_suppressed_fraction\n";
  for (Variant v : {Variant::kImsnn, Variant::kSnn, Variant::kImsnnC}) {
    RunConfig c = base;
    c.variant = v;
    c.output_dir = (root / VariantName(v)).string();
    const TrainedRun run = TrainAndEmit(c, train, test, out);
    const MetricsRecord* t = LastOf(run.records, "test");
    const MetricsRecord* tr = LastOf(run.records, "train");
    kappa.push_back(t->network_spikes);
    table.push_back({{"variant", VariantName(v)},
                     {"test_accuracy", t->accuracy},
                     {"network_kappa_n", t->network_spikes},
                     {"layer_kappa_n", t->layer_spikes},
                     {"train_suppressed_fraction", tr->suppressed_fraction}});
    csv << VariantName(v) << ',' << FormatDouble(t->accuracy) << ','
        << FormatDouble(t->network_spikes) << ',' << FormatDouble(tr->suppressed_fraction)
        << '\n';
  }
  const bool ordered = kappa[0] < kappa[1] && kappa[1] < kappa[2];
  json doc = {{"kind", "imsnn-ablation"},
              {"version", VersionString()},
              {"config", RunConfigToJson(base)},
              {"results", table},
              {"ordering_holds", ordered}};
  fs::create_directories(root);
  std::ofstream(root / "ablation.json") << doc.dump(1) << "\n";
  std::ofstream(root / "ablation.csv") << csv.str();
  out << "\n" << csv.str()
      << "kappa_n ordering imsnn < snn < imsnn_c: " << (ordered ? "holds" : "does not hold")
      << "\n";
  return 0;
}

int CmdGradcheck(const Overrides& o, double step, bool verbose, std::ostream& out) {
  const std::uint64_t seed = o.seed.value_or(0);
  std::mt19937_64 rng(seed);
  InitConfig init;
  init.height_std = 0.5;
  Network net = InitNetwork("10-5-3", Variant::kImsnn, seed, init);
  for (double& h : net.banks.back().heights()) h = std::abs(h);
  SpikeRaster input(20, 10);
  std::bernoulli_distribution fire(0.4);
  for (int t = 0; t < input.steps(); ++t) {
    for (int n = 0; n < input.neurons(); ++n) input.set(t, n, fire(rng));
  }
  const int label = static_cast<int>(seed % 3);
  BackwardConfig bcfg;
  GradCheckOptions opts;
  opts.step = step;
  opts.seed = seed;
  const GradCheckReport report = FdCheckLastLayer(net, input, label, {}, bcfg, opts);
  const std::string text = GradCheckReportToJson(report);
  out << text << "\n";
  if (verbose) {
    const ForwardResult fwd = ForwardPass(net, input);
    const LossResult loss = CrossEntropy(fwd.output, label);
    out << BackwardToJson(Backward(net, fwd, loss.grad, {}, bcfg), fwd.steps()) << "\n";
  }
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    std::ofstream(fs::path(o.out_dir) / "gradcheck.json") << text << "\n";
  }
  return report.passed ? 0 : 1;
}

}  // namespace

std::string VersionString() {
  return std::string(IMSNN_VERSION) + "+" + IMSNN_GIT_DESCRIBE;
}

std::string MetricsCsvHeader(int hidden_layers) {
  std::string h = "epoch,split,accuracy";
  for (int l = 1; l <= hidden_layers; ++l) h += ",kappa_n_layer" + std::to_string(l);
  h += ",kappa_n_network,loss,suppressed_fraction,samples,degenerate";
  return h;
}

std::string MetricsCsvRow(const MetricsRecord& r) {
  std::string row = std::to_string(r.epoch) + "," + r.split + "," + FormatDouble(r.accuracy);
  for (double k : r.layer_spikes) row += "," + FormatDouble(k);
  row += "," + FormatDouble(r.network_spikes) + "," + FormatDouble(r.loss) + "," +
         FormatDouble(r.suppressed_fraction) + "," + std::to_string(r.samples) + "," +
         std::to_string(r.degenerate);
  return row;
}

RunArtifacts EmitResults(const std::vector<MetricsRecord>& records,
                         const RunConfig& config, const Network& net,
                         const fs::path& output_dir, double wall_seconds) {
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec || !fs::is_directory(output_dir)) {
    throw Error(ErrorKind::kIo, "cannot create output directory " + output_dir.string());
  }
  RunArtifacts a{output_dir / "metrics.csv", output_dir / "summary.json",
                 output_dir / "model.json"};

  const bool fresh = !fs::exists(a.metrics_csv);
  {
    std::ofstream csv(a.metrics_csv, std::ios::app);
    if (!csv) throw Error(ErrorKind::kIo, "cannot write " + a.metrics_csv.string());
    if (fresh) csv << MetricsCsvHeader(net.hidden_layers()) << "\n";
    for (const MetricsRecord& r : records) csv << MetricsCsvRow(r) << "\n";
    if (!csv) throw Error(ErrorKind::kIo, "short write to " + a.metrics_csv.string());
  }

  json summary;
  summary["kind"] = "imsnn-summary";
  summary["version"] = VersionString();
  RunConfig echo = config;
  echo.output_dir = output_dir.string();
  summary["config"] = RunConfigToJson(echo);
  summary["wall_seconds"] = wall_seconds;
  if (const MetricsRecord* t = LastOf(records, "test")) summary["final_test"] = RecordToJson(*t);
  if (const MetricsRecord* t = LastOf(records, "train")) summary["final_train"] = RecordToJson(*t);
  json all = json::array();
  for (const MetricsRecord& r : records) all.push_back(RecordToJson(r));
  summary["records"] = std::move(all);
  const std::string text = summary.dump(1) + "\n";
  WriteFileAtomic(a.summary_json,
                  std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  SaveModel(net, a.model_json);
  return a;
}

int RunSubcommand(const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err) {
  CLI::App app{"Train and inspect ISI-modulated spiking neural networks", "imsnn"};
  app.set_version_flag("--version", VersionString());
  app.require_subcommand(1);
  Overrides o;
  std::string model_path;
  std::string split = "test";
  double step = 1e-6;
  bool verbose = false;

  auto* train = app.add_subcommand("train", "Train a network and write metrics, summary and model");
  AddRunFlags(*train, o);
  auto* eval = app.add_subcommand("eval", "Evaluate a saved model");
  AddRunFlags(*eval, o);
  eval->add_option("--model", model_path, "model.json to evaluate")->required();
  eval->add_option("--split", split, "train or test");
  auto* demo = app.add_subcommand("demo", "Single-neuron Gaussian synapse demonstration");
  demo->add_option("--out", o.out_dir, "Directory for raster CSVs");
  auto* ablate = app.add_subcommand("ablate", "Train imsnn, snn and imsnn_c with a shared seed");
  AddRunFlags(*ablate, o);
  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of output-layer gradients");
  grad->add_option("--seed", o.seed, "Network and input seed");
  grad->add_option("--step", step, "Central-difference step");
  grad->add_option("--out", o.out_dir, "Directory for gradcheck.json");
  grad->add_flag("--verbose", verbose, "Also dump the backward tensors as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << VersionString() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return ExitCodeFor(ErrorKind::kConfig);
  }

  try {
    if (train->parsed()) return CmdTrain(o, out);
    if (eval->parsed()) return CmdEval(o, model_path, split, out);
    if (demo->parsed()) return CmdDemo(o, out);
    if (ablate->parsed()) return CmdAblate(o, out);
    if (grad->parsed()) return CmdGradcheck(o, step, verbose, out);
  } catch (const Error& e) {
    err << "error [" << ErrorKindName(e.kind()) << "]: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error [io]: " << e.what() << "\n";
    return ExitCodeFor(ErrorKind::kIo);
  } catch (const std::exception& e) {
    err << "error [internal]: " << e.what() << "\n";
    return ExitCodeFor(ErrorKind::kInternal);
  }
  return ExitCodeFor(ErrorKind::kInternal);
}

}  // namespace imsnn
