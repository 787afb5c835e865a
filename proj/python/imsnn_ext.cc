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


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "imsnn/architecture.h"
#include "imsnn/backprop.h"
#include "imsnn/cli.h"
#include "imsnn/core.h"
#include "imsnn/encoding.h"
#include "imsnn/errors.h"
#include "imsnn/network.h"
#include "imsnn/oracle.h"
#include "imsnn/serialize.h"
#include "imsnn/training.h"

namespace py = pybind11;

namespace imsnn {
namespace {

using Array = py::array_t<double>;
using Bits = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

constexpr ErrorKind kAllKinds[] = {
    ErrorKind::kConfig,           ErrorKind::kValidation,     ErrorKind::kParse,
    ErrorKind::kChecksum,         ErrorKind::kCacheMiss,      ErrorKind::kNetwork,
    ErrorKind::kDegenerateOutput, ErrorKind::kDegenerateRun, ErrorKind::kIo,
    ErrorKind::kGuard,            ErrorKind::kInternal};

Array ToArray(const std::vector<double>& v, py::ssize_t rows, py::ssize_t cols) {
  Array a({rows, cols});
  std::memcpy(a.mutable_data(), v.data(), v.size() * sizeof(double));
  return a;
}

Array ToArray(const std::vector<double>& v) {
  Array a(static_cast<py::ssize_t>(v.size()));
  std::memcpy(a.mutable_data(), v.data(), v.size() * sizeof(double));
  return a;
}

Bits ToBits(const SpikeRaster& r) {
  Bits a({static_cast<py::ssize_t>(r.steps()), static_cast<py::ssize_t>(r.neurons())});
  std::memcpy(a.mutable_data(), r.bits().data(), r.bits().size());
  return a;
}

SpikeRaster FromBits(const Bits& a) {
  if (a.ndim() != 2) throw Error(ErrorKind::kValidation, "raster must be a 2-D (steps, neurons) array");
  const auto* p = a.data();
  return SpikeRaster::FromBits(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                               std::vector<std::uint8_t>(p, p + a.size()));
}

std::vector<double> ToVector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return std::vector<double>(a.data(), a.data() + a.size());
}

NeuronParams Neuron(double beta, double threshold) {
  NeuronParams n;
  n.beta = beta;
  n.threshold = threshold;
  return n;
}

py::dict ForwardToDict(const ForwardResult& fwd) {
  py::list spikes, potentials, isis;
  for (const LayerTrace& layer : fwd.layers) {
    spikes.append(ToBits(layer.spikes));
    if (layer.potentials.empty()) {
      potentials.append(py::none());
    } else {
      potentials.append(ToArray(layer.potentials, layer.steps(), layer.neurons()));
    }
    py::array_t<std::int32_t> isi({static_cast<py::ssize_t>(layer.steps()),
                                   static_cast<py::ssize_t>(layer.neurons())});
    std::memcpy(isi.mutable_data(), layer.isis.data(), layer.isis.size() * sizeof(Isi));
    isis.append(isi);
  }
  py::dict d;
  d["spikes"] = spikes;
  d["potentials"] = potentials;
  d["isi"] = isis;
  d["output"] = ToArray(fwd.output);
  return d;
}

py::dict BackwardToDict(const BackwardResult& res, const Network& net, int steps) {
  py::list grads, epsilon, isi_gradient;
  for (const auto& g : res.height_grads) grads.append(ToArray(g));
  for (std::size_t l = 0; l < res.epsilon.size(); ++l) {
    const py::ssize_t n = net.layer_sizes[l];
    epsilon.append(res.epsilon[l].empty() ? py::object(py::none())
                                          : py::object(ToArray(res.epsilon[l], steps, n)));
    isi_gradient.append(res.isi_gradient[l].empty()
                            ? py::object(py::none())
                            : py::object(ToArray(res.isi_gradient[l], steps, n)));
  }
  py::dict d;
  d["height_grads"] = grads;
  d["epsilon"] = epsilon;
  d["isi_gradient"] = isi_gradient;
  d["spiking_sites"] = res.spiking_sites;
  d["suppressed_sites"] = res.suppressed_sites;
  return d;
}

BackwardConfig BackwardFor(const Network& net, const std::string& mode, double slope) {
  BackwardConfig cfg;
  cfg.surrogate_slope = slope;
  cfg.mode = mode.empty() ? ModeForVariant(net.variant) : ParseSuppressionMode(mode);
  return cfg;
}

}  // namespace
}  // namespace imsnn

PYBIND11_MODULE(_core, m) {
  using namespace imsnn;
  m.doc() = "Core of the imsnn package: Gaussian-synapse spiking networks";
  m.attr("__version__") = VersionString();

  static py::exception<Error> error_type(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      exc.attr("kind") = ErrorKindName(e.kind());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("exit_code_for", [](const std::string& kind) {
    for (ErrorKind k : kAllKinds) {
      if (kind == ErrorKindName(k)) return ExitCodeFor(k);
    }
    throw py::value_error("unknown error kind '" + kind + "'");
  }, py::arg("kind"), "Process exit code of an error kind such as 'config'.");

  m.def("isi_update", [](int isi, bool spiked) { return IsiUpdate(isi, spiked); },
        py::arg("isi"), py::arg("spiked"));
  m.def("isi_trace", [](const Bits& raster) {
    const SpikeRaster r = FromBits(raster);
    const std::vector<Isi> trace = IsiTrace(r);
    py::array_t<std::int32_t> a({static_cast<py::ssize_t>(r.steps()),
                                 static_cast<py::ssize_t>(r.neurons())});
    std::memcpy(a.mutable_data(), trace.data(), trace.size() * sizeof(Isi));
    return a;
  }, py::arg("raster"), "ISI seen at every (step, neuron) of a raster.");
  m.def("gaussian_factor", &GaussianFactor, py::arg("mean"), py::arg("width"), py::arg("isi"));
  m.def("membrane_step", [](double v, double beta, double inflow, double threshold,
                            bool can_spike) {
    const MembraneStepResult r = MembraneStep(v, beta, inflow, threshold, can_spike);
    return py::make_tuple(r.potential, r.spike);
  }, py::arg("potential"), py::arg("beta"), py::arg("inflow"), py::arg("threshold") = 1.0,
        py::arg("can_spike") = true, "Returns (post-reset potential, spiked).");
  m.def("output_probabilities", [](const std::vector<double>& v) { return OutputProbabilities(v); },
        py::arg("potentials"));
  m.def("surrogate", &SurrogateSpikeDerivative, py::arg("potential"),
        py::arg("threshold") = 1.0, py::arg("slope") = 10.0);
  m.def("cross_entropy", [](const std::vector<double>& v, int label) {
    const LossResult r = CrossEntropy(v, label);
    return py::make_tuple(r.loss, r.grad);
  }, py::arg("potentials"), py::arg("label"), "Returns (loss, dloss/dpotential).");
  m.def("parse_architecture", [](const std::string& spec) {
    return LayerSizes(ParseArchitecture(spec));
  }, py::arg("spec"), "Neuron count of every layer, input first.");

  m.def("encode", [](const std::vector<double>& pixels, int steps, double dt_ms,
                     double rate_min, double rate_max, const std::string& scheme,
                     std::uint64_t seed) {
    EncoderConfig cfg;
    cfg.steps = steps;
    cfg.dt_ms = dt_ms;
    cfg.rate_min_hz = rate_min;
    cfg.rate_max_hz = rate_max;
    cfg.scheme = ParseEncoderScheme(scheme);
    cfg.seed = seed;
    return ToBits(Encode(pixels, cfg));
  }, py::arg("pixels"), py::arg("steps") = EncoderConfig{}.steps,
        py::arg("dt_ms") = EncoderConfig{}.dt_ms,
        py::arg("rate_min") = EncoderConfig{}.rate_min_hz,
        py::arg("rate_max") = EncoderConfig{}.rate_max_hz,
        py::arg("scheme") = EncoderSchemeName(EncoderConfig{}.scheme), py::arg("seed") = 0,
        "Rate-code normalized pixels into a (steps, pixels) raster.");

  py::class_<Network>(m, "Network")
      .def(py::init([](const std::string& architecture, const std::string& variant,
                       std::uint64_t seed, double height_mean, double height_std) {
             InitConfig init;
             init.height_mean = height_mean;
             init.height_std = height_std;
             return InitNetwork(architecture, ParseVariant(variant), seed, init);
           }),
           py::arg("architecture"), py::arg("variant") = "imsnn", py::arg("seed") = 0,
           py::arg("height_mean") = InitConfig{}.height_mean,
           py::arg("height_std") = InitConfig{}.height_std)
      .def_readonly("architecture", &Network::architecture)
      .def_property_readonly("variant", [](const Network& n) { return VariantName(n.variant); })
      .def_readonly("layer_sizes", &Network::layer_sizes)
      .def_property_readonly("num_banks", [](const Network& n) { return n.banks.size(); })
      .def("heights", [](const Network& n, std::size_t b) { return ToArray(n.banks.at(b).heights()); },
           py::arg("bank"))
      .def("means", [](const Network& n, std::size_t b) { return ToArray(n.banks.at(b).means()); },
           py::arg("bank"))
      .def("widths", [](const Network& n, std::size_t b) { return ToArray(n.banks.at(b).widths()); },
           py::arg("bank"))
      .def("set_heights", [](Network& n, std::size_t b,
                             const py::array_t<double, py::array::c_style | py::array::forcecast>& h) {
             auto& heights = n.banks.at(b).heights();
             if (static_cast<std::size_t>(h.size()) != heights.size()) {
               throw Error(ErrorKind::kValidation, "height array has the wrong size");
             }
             heights = ToVector(h);
           }, py::arg("bank"), py::arg("heights"))
      .def("set_shape", [](Network& n, std::size_t b, int index, double mean, double width) {
             n.banks.at(b).SetShape(index, mean, width);
           }, py::arg("bank"), py::arg("index"), py::arg("mean"), py::arg("width"))
      .def("to_json", &ModelToJson)
      .def_static("from_json", [](const std::string& text) { return ModelFromJson(text); },
                  py::arg("text"))
      .def("__repr__", [](const Network& n) {
        return "<imsnn.Network " + n.architecture + " " + VariantName(n.variant) + ">";
      });

  m.def("save_model", &SaveModel, py::arg("network"), py::arg("path"));
  m.def("load_model", &LoadModel, py::arg("path"));

  m.def("forward", [](const Network& net, const Bits& input, double beta, double threshold) {
    return ForwardToDict(ForwardPass(net, FromBits(input), Neuron(beta, threshold)));
  }, py::arg("network"), py::arg("input"), py::arg("beta") = NeuronParams{}.beta,
        py::arg("threshold") = NeuronParams{}.threshold,
        "Spikes, pre-reset potentials and ISIs of every layer, plus the output potentials.");

  auto backward = [](bool oracle) {
    return [oracle](const Network& net, const Bits& input, const std::vector<double>& output_grad,
                    const std::string& mode, double beta, double threshold, double slope) {
      const NeuronParams neuron = Neuron(beta, threshold);
      const ForwardResult fwd = ForwardPass(net, FromBits(input), neuron);
      const BackwardConfig cfg = BackwardFor(net, mode, slope);
      const BackwardResult res = oracle ? DirectSumBackward(net, fwd, output_grad, neuron, cfg)
                                        : Backward(net, fwd, output_grad, neuron, cfg);
      return BackwardToDict(res, net, fwd.steps());
    };
  };
  m.def("backward", backward(false), py::arg("network"), py::arg("input"),
        py::arg("output_grad"), py::arg("mode") = "", py::arg("beta") = NeuronParams{}.beta,
        py::arg("threshold") = NeuronParams{}.threshold, py::arg("slope") = 10.0,
        "Gradients for a given dL/dv of the output layer. mode defaults to the variant's own.");
  m.def("oracle_backward", backward(true), py::arg("network"), py::arg("input"),
        py::arg("output_grad"), py::arg("mode") = "", py::arg("beta") = NeuronParams{}.beta,
        py::arg("threshold") = NeuronParams{}.threshold, py::arg("slope") = 10.0,
        "Direct-sum reference for backward on small networks.");

  m.def("gradcheck", [](const Network& net, const Bits& input, int label, double step,
                        int max_coords, std::uint64_t seed) {
    GradCheckOptions opts;
    opts.step = step;
    opts.max_coords = max_coords;
    opts.seed = seed;
    BackwardConfig cfg;
    cfg.mode = ModeForVariant(net.variant);
    const GradCheckReport r = FdCheckLastLayer(net, FromBits(input), label, {}, cfg, opts);
    py::dict d;
    d["passed"] = r.passed;
    d["regime"] = r.regime;
    d["max_rel_error"] = r.max_rel_error;
    d["valid_count"] = r.valid_count;
    d["invalid_count"] = r.invalid_count;
    return d;
  }, py::arg("network"), py::arg("input"), py::arg("label"), py::arg("step") = 1e-6,
        py::arg("max_coords") = 50, py::arg("seed") = 0,
        "Finite-difference check of the output-layer height gradients.");

  m.def("demo", []() {
    const DemoResult d = DemoSingleNeuron();
    py::dict out;
    out["input"] = ToBits(d.input);
    out["conventional"] = ToBits(d.conventional);
    out["matched"] = ToBits(d.matched);
    out["shifted"] = ToBits(d.shifted);
    out["matched_inflow"] = d.matched_inflow;
    out["shifted_inflow"] = d.shifted_inflow;
    out["passed"] = d.passed();
    return out;
  }, "Single-neuron demonstration of ISI-selective synapses.");
}
