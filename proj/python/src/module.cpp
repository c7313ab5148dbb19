// Copyright 2026 The frets Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "frets/check_suite.hpp"
#include "frets/checkpoint.hpp"
#include "frets/data.hpp"
#include "frets/errors.hpp"
#include "frets/fft.hpp"
#include "frets/fremlp.hpp"
#include "frets/model.hpp"
#include "frets/training.hpp"

namespace py = pybind11;
using namespace frets;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray =
    py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

RealTensor to_tensor(const RealArray& a) {
  Shape shape(a.shape(), a.shape() + a.ndim());
  return RealTensor(shape, std::vector<double>(a.data(), a.data() + a.size()));
}

ComplexTensor to_complex(const ComplexArray& a) {
  Shape shape(a.shape(), a.shape() + a.ndim());
  ComplexTensor out(shape);
  const std::complex<double>* src = a.data();
  for (py::ssize_t i = 0; i < a.size(); ++i) {
    out.re[i] = src[i].real();
    out.im[i] = src[i].imag();
  }
  return out;
}

RealArray to_array(const RealTensor& t) {
  RealArray out(t.shape());
  std::copy(t.data(), t.data() + t.size(), out.mutable_data());
  return out;
}

ComplexArray to_array(const ComplexTensor& t) {
  ComplexArray out(t.shape());
  std::complex<double>* dst = out.mutable_data();
  for (std::size_t i = 0; i < t.size(); ++i) dst[i] = {t.re[i], t.im[i]};
  return out;
}

std::size_t resolve_axis(py::ssize_t axis, py::ssize_t ndim) {
  const py::ssize_t resolved = axis < 0 ? axis + ndim : axis;
  if (resolved < 0 || resolved >= ndim)
    throw DimensionError("axis " + std::to_string(axis) + " out of range for rank " +
                         std::to_string(ndim));
  return static_cast<std::size_t>(resolved);
}

Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "identity") return Activation::kIdentity;
  throw ConfigError("unknown activation '" + name + "' (expected relu or identity)");
}

SeriesMatrix to_series(const RealArray& values) {
  if (values.ndim() != 2)
    throw DimensionError("series must be [channels x length], got rank " +
                         std::to_string(values.ndim()));
  SeriesMatrix s{to_tensor(values), {}};
  for (std::size_t i = 0; i < s.channels(); ++i) s.names.push_back("c" + std::to_string(i));
  return s;
}

py::dict blocks_of(const FreTSParams& params) {
  py::dict out;
  for_each_block(params, [&](const std::string& name, const RealTensor& t) {
    out[py::str(name)] = to_array(t);
  });
  return out;
}

void set_block(FreTSParams& params, const std::string& name, const RealArray& values) {
  bool found = false;
  for_each_block(params, [&](const std::string& block, RealTensor& t) {
    if (block != name) return;
    RealTensor next = to_tensor(values);
    if (next.shape() != t.shape())
      throw DimensionError("block " + name + " has shape " + shape_to_string(t.shape()) +
                           ", got " + shape_to_string(next.shape()));
    t = std::move(next);
    found = true;
  });
  if (!found) throw ConfigError("no parameter block named '" + name + "'");
}

py::dict suite_to_dict(const check::SuiteResult& r) {
  py::dict d;
  d["name"] = r.name;
  d["passed"] = r.passed;
  d["max_error"] = r.max_error;
  d["tolerance"] = r.tolerance;
  d["instances"] = r.instances;
  d["worst_seed"] = r.worst_seed;
  d["detail"] = r.detail;
  return d;
}

}  // namespace

PYBIND11_MODULE(_frets, m) {
  m.doc() = "Frequency-domain MLP forecaster (FreTS) bindings.";

  static py::exception<Error> base_error(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base_error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base_error.ptr());
  py::register_exception<IngestionError>(m, "IngestionError", base_error.ptr());
  py::register_exception<IoError>(m, "IoError", base_error.ptr());
  py::register_exception<TrainingError>(m, "TrainingError", base_error.ptr());

  py::enum_<Activation>(m, "Activation")
      .value("RELU", Activation::kRelu)
      .value("IDENTITY", Activation::kIdentity);

  py::enum_<LearnerDomain>(m, "LearnerDomain")
      .value("FREQUENCY", LearnerDomain::kFrequency)
      .value("TIME", LearnerDomain::kTime);

  py::class_<ModelConfig>(m, "ModelConfig")
      .def(py::init([](const py::kwargs& kwargs) {
        ModelConfig config;
        py::object self = py::cast(&config, py::return_value_policy::reference);
        for (const auto& [key, value] : kwargs) {
          if (!py::hasattr(self, key))
            throw ConfigError("unknown model option '" + py::str(key).cast<std::string>() +
                              "'");
          py::setattr(self, key, value);
        }
        return config;
      }))
      .def_readwrite("lookback", &ModelConfig::lookback)
      .def_readwrite("horizon", &ModelConfig::horizon)
      .def_readwrite("channels", &ModelConfig::channels)
      .def_readwrite("embed_dim", &ModelConfig::embed_dim)
      .def_readwrite("hidden_dim", &ModelConfig::hidden_dim)
      .def_readwrite("fremlp_layers", &ModelConfig::fremlp_layers)
      .def_readwrite("use_channel_learner", &ModelConfig::use_channel_learner)
      .def_readwrite("use_temporal_learner", &ModelConfig::use_temporal_learner)
      .def_readwrite("channel_independent", &ModelConfig::channel_independent)
      .def_readwrite("domain", &ModelConfig::domain)
      .def_readwrite("learner_activation", &ModelConfig::learner_activation)
      .def_readwrite("projection_activation", &ModelConfig::projection_activation)
      .def_readwrite("seed", &ModelConfig::seed)
      .def("validate", &ModelConfig::validate)
      .def("__eq__", [](const ModelConfig& a, const ModelConfig& b) { return a == b; })
      .def("__repr__", [](const ModelConfig& c) {
        return "ModelConfig(lookback=" + std::to_string(c.lookback) +
               ", horizon=" + std::to_string(c.horizon) +
               ", channels=" + std::to_string(c.channels) +
               ", embed_dim=" + std::to_string(c.embed_dim) +
               ", hidden_dim=" + std::to_string(c.hidden_dim) + ")";
      });

  py::class_<FreTSParams>(m, "Params")
      .def("blocks", &blocks_of, "Copy of every parameter block, keyed by name.")
      .def("set_block", &set_block, py::arg("name"), py::arg("values"))
      .def("parameter_count", [](const FreTSParams& p) { return parameter_count(p); })
      .def("__eq__", [](const FreTSParams& a, const FreTSParams& b) { return a == b; });

  m.def("init_params", &init_params, py::arg("config"));

  m.def(
      "rfft",
      [](const RealArray& x, py::ssize_t axis) {
        return to_array(rfft(to_tensor(x), resolve_axis(axis, x.ndim())));
      },
      py::arg("x"), py::arg("axis") = -1);

  m.def(
      "irfft",
      [](const ComplexArray& spectrum, std::size_t n, py::ssize_t axis) {
        return to_array(irfft(to_complex(spectrum), n, resolve_axis(axis, spectrum.ndim())));
      },
      py::arg("spectrum"), py::arg("n"), py::arg("axis") = -1);

  m.def(
      "circular_conv",
      [](const RealArray& h, const RealArray& w) {
        return to_array(circular_conv(to_tensor(h), to_tensor(w)));
      },
      py::arg("h"), py::arg("w"));

  m.def(
      "fremlp_forward",
      [](const ComplexArray& x, const ComplexArray& weight, const ComplexArray& bias,
         const std::string& activation) {
        const ComplexTensor w = to_complex(weight);
        const ComplexTensor b = to_complex(bias);
        const FreMLPParams params{w.re, w.im, b.re, b.im};
        return to_array(fremlp_forward(to_complex(x), params, parse_activation(activation)));
      },
      py::arg("x"), py::arg("weight"), py::arg("bias"), py::arg("activation") = "relu");

  m.def(
      "frets_forward",
      [](const RealArray& x, const FreTSParams& params, const ModelConfig& config) {
        const RealTensor input = to_tensor(x);
        RealTensor out;
        {
          py::gil_scoped_release release;
          out = frets_forward(input, params, config);
        }
        return to_array(out);
      },
      py::arg("x"), py::arg("params"), py::arg("config"));

  m.def(
      "loss_and_grad",
      [](const RealArray& x, const RealArray& targets, const FreTSParams& params,
         const ModelConfig& config) {
        const RealTensor input = to_tensor(x), target = to_tensor(targets);
        LossAndGrads result;
        {
          py::gil_scoped_release release;
          result = frets_backward(input, target, params, config);
        }
        return py::make_tuple(result.loss, blocks_of(result.grads));
      },
      py::arg("x"), py::arg("targets"), py::arg("params"), py::arg("config"));

  m.def(
      "train",
      [](const ModelConfig& config, const RealArray& train_series, const RealArray& val_series,
         double lr, std::size_t batch_size, std::size_t epochs, std::size_t patience,
         std::uint64_t seed) {
        const SeriesMatrix train_s = to_series(train_series), val_s = to_series(val_series);
        TrainConfig tc;
        tc.lr = lr;
        tc.batch_size = batch_size;
        tc.epochs = epochs;
        tc.patience = patience;
        tc.seed = seed;
        TrainResult result;
        {
          py::gil_scoped_release release;
          const WindowedDataset train_set =
              make_windows(train_s, config.lookback, config.horizon);
          const WindowedDataset val_set = make_windows(val_s, config.lookback, config.horizon);
          result = train(config, train_set, val_set, tc);
        }
        py::list log;
        for (const EpochRecord& r : result.log)
          log.append(py::dict(py::arg("epoch") = r.epoch, py::arg("train_loss") = r.train_loss,
                              py::arg("val_mae") = r.val.mae, py::arg("val_rmse") = r.val.rmse));
        return py::make_tuple(std::move(result.params), log);
      },
      py::arg("config"), py::arg("train_series"), py::arg("val_series"), py::arg("lr") = 1e-3,
      py::arg("batch_size") = 32, py::arg("epochs") = 100, py::arg("patience") = 10,
      py::arg("seed") = 0);

  m.def(
      "evaluate",
      [](const FreTSParams& params, const ModelConfig& config, const RealArray& series) {
        const SeriesMatrix s = to_series(series);
        py::gil_scoped_release release;
        const Metrics metrics =
            evaluate(params, config, make_windows(s, config.lookback, config.horizon));
        return std::make_pair(metrics.mae, metrics.rmse);
      },
      py::arg("params"), py::arg("config"), py::arg("series"));

  m.def(
      "synth_sinusoids",
      [](std::size_t channels, std::size_t length,
         const std::vector<std::tuple<std::size_t, double, double, double>>& components,
         std::size_t period_base, double noise_std, std::uint64_t seed) {
        SynthSpec spec;
        spec.channels = channels;
        spec.length = length;
        spec.period_base = period_base;
        spec.noise_std = noise_std;
        spec.seed = seed;
        for (const auto& [channel, cycles, amplitude, phase] : components)
          spec.components.push_back({channel, cycles, amplitude, phase});
        return to_array(synth_sinusoids(spec).values);
      },
      py::arg("channels"), py::arg("length"), py::arg("components"),
      py::arg("period_base") = 0, py::arg("noise_std") = 0.0, py::arg("seed") = 0);

  py::class_<Checkpoint>(m, "Checkpoint")
      .def_readonly("model", &Checkpoint::model)
      .def_readonly("params", &Checkpoint::params)
      .def_readonly("channel_names", &Checkpoint::channel_names)
      .def_property_readonly("best_val_mae",
                             [](const Checkpoint& c) { return c.summary.best_val.mae; })
      .def_property_readonly("epochs_run",
                             [](const Checkpoint& c) { return c.summary.epochs_run; })
      .def(
          "forecast",
          [](const Checkpoint& c, const RealArray& window) {
            return to_array(forecast(c, to_tensor(window)));
          },
          py::arg("window"), "Forecast from a raw-scale [N x L] window; returns [N x tau].");

  m.def(
      "load_checkpoint", [](const std::string& path) { return load_checkpoint(path); },
      py::arg("path"));

  m.def(
      "run_checks",
      [](std::uint64_t seed) {
        std::vector<check::SuiteResult> results;
        {
          py::gil_scoped_release release;
          results = check::run_all(seed);
        }
        py::list out;
        for (const check::SuiteResult& r : results) out.append(suite_to_dict(r));
        return out;
      },
      py::arg("seed") = 0);
}
