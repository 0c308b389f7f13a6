// Copyright 2026 The spikets Authors
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

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "spikets/data.hpp"
#include "spikets/encoding.hpp"
#include "spikets/errors.hpp"
#include "spikets/event_inference.hpp"
#include "spikets/experiment.hpp"
#include "spikets/network.hpp"
#include "spikets/training.hpp"

namespace py = pybind11;
using namespace spikets;

namespace {

using DenseArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Series series_from_array(const DenseArray& a) {
  if (a.ndim() != 2) throw ContractError("series must be a 2-D array [channels, length]");
  const auto r = a.unchecked<2>();
  Series s(static_cast<std::size_t>(r.shape(0)));
  for (py::ssize_t c = 0; c < r.shape(0); ++c) {
    s[c].resize(static_cast<std::size_t>(r.shape(1)));
    for (py::ssize_t t = 0; t < r.shape(1); ++t) s[c][t] = r(c, t);
  }
  return s;
}

DenseArray series_to_array(const Series& s) {
  const std::size_t len = s.empty() ? 0 : s.front().size();
  DenseArray out({s.size(), len});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t c = 0; c < s.size(); ++c) {
    for (std::size_t t = 0; t < len; ++t) w(c, t) = s[c][t];
  }
  return out;
}

SpikeRaster raster_from_dense(
    const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw ContractError("raster must be a 2-D array [units, steps]");
  const auto r = a.unchecked<2>();
  SpikeRaster out(static_cast<std::size_t>(r.shape(0)), static_cast<std::size_t>(r.shape(1)));
  for (py::ssize_t u = 0; u < r.shape(0); ++u) {
    for (py::ssize_t t = 0; t < r.shape(1); ++t) {
      if (r(u, t)) out.set(static_cast<std::size_t>(u), static_cast<std::size_t>(t));
    }
  }
  return out;
}

py::array_t<std::uint8_t> raster_to_dense(const SpikeRaster& r) {
  py::array_t<std::uint8_t> out({r.num_units(), r.num_steps()});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t u = 0; u < r.num_units(); ++u) {
    for (std::size_t t = 0; t < r.num_steps(); ++t) w(u, t) = r.at(u, t) ? 1 : 0;
  }
  return out;
}

DenseArray matrix_to_array(const Matrix& m) {
  DenseArray out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

Matrix matrix_from_array(const DenseArray& a) {
  if (a.ndim() != 2) throw ContractError("weights must be a 2-D array");
  return Matrix(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                std::vector<double>(a.data(), a.data() + a.size()));
}

SpikeMode parse_mode(const std::string& mode) {
  if (mode == "spiking") return SpikeMode::kSpiking;
  if (mode == "smoothed") return SpikeMode::kSmoothed;
  throw ConfigError("mode must be 'spiking' or 'smoothed', got '" + mode + "'");
}

py::dict dataset_dict(const TimeSeriesDataset& ds) {
  py::list samples;
  for (const auto& s : ds.samples) samples.append(series_to_array(s));
  py::dict d;
  d["name"] = ds.name;
  d["samples"] = samples;
  d["labels"] = ds.labels;
  d["class_names"] = ds.class_names;
  d["num_channels"] = ds.num_channels;
  d["series_length"] = ds.series_length;
  d["original_lengths"] = ds.original_lengths;
  d["missing_values_imputed"] = ds.missing_values_imputed;
  return d;
}

TimeSeriesDataset dataset_from(const py::list& samples, const std::vector<std::size_t>& labels,
                               const std::vector<std::string>& class_names,
                               const std::string& name) {
  TimeSeriesDataset ds;
  ds.name = name;
  ds.class_names = class_names;
  ds.labels = labels;
  for (const auto& s : samples) {
    ds.samples.push_back(series_from_array(s.cast<DenseArray>()));
    ds.original_lengths.push_back(ds.samples.back().empty() ? 0
                                                            : ds.samples.back().front().size());
    ds.series_length = std::max(ds.series_length, ds.original_lengths.back());
  }
  ds.num_channels = ds.samples.empty() ? 0 : ds.samples.front().size();
  ds.validate();
  return ds;
}

std::vector<LabeledRaster> labeled(const std::vector<SpikeRaster>& rasters,
                                   const std::vector<std::size_t>& labels) {
  SPIKETS_REQUIRE(rasters.size() == labels.size(), "one label per raster required");
  std::vector<LabeledRaster> out;
  for (std::size_t i = 0; i < rasters.size(); ++i) out.push_back({rasters[i], labels[i]});
  return out;
}

py::dict metrics_dict(const EpochMetrics& m) {
  py::dict d;
  d["epoch"] = m.epoch;
  d["train_loss"] = m.train_loss;
  d["train_acc"] = m.train_acc;
  d["val_loss"] = m.val_loss ? py::cast(*m.val_loss) : py::none();
  d["val_acc"] = m.val_acc ? py::cast(*m.val_acc) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_spikets, m) {
  m.doc() = "Spiking networks for multivariate time-series classification";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ContractError>(m, "ContractError", base.ptr());
  auto data_error = py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<ChecksumError>(m, "ChecksumError", data_error.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<NeuronHyperParams>(m, "NeuronHyperParams")
      .def(py::init<double, double, double, double>(), py::arg("tau_m") = 20.0,
           py::arg("tau_s") = 5.0, py::arg("tau") = 20.0, py::arg("v_th") = 1.0)
      .def_property_readonly("tau_m", &NeuronHyperParams::tau_m)
      .def_property_readonly("tau_s", &NeuronHyperParams::tau_s)
      .def_property_readonly("tau", &NeuronHyperParams::tau)
      .def_property_readonly("v_th", &NeuronHyperParams::v_th)
      .def_property_readonly("alpha", &NeuronHyperParams::alpha)
      .def_property_readonly("beta", &NeuronHyperParams::beta)
      .def_property_readonly("gamma", &NeuronHyperParams::gamma)
      .def_property_readonly("v0", &NeuronHyperParams::v0)
      .def_property_readonly("peak_time", &NeuronHyperParams::peak_time)
      .def("__repr__", [](const NeuronHyperParams& h) {
        return "NeuronHyperParams(tau_m=" + std::to_string(h.tau_m()) +
               ", tau_s=" + std::to_string(h.tau_s()) + ", tau=" + std::to_string(h.tau()) +
               ", v_th=" + std::to_string(h.v_th()) + ")";
      });

  m.def("kernel_value", &kernel_value, py::arg("t"), py::arg("hyper"));
  m.def(
      "psp_check",
      [](const std::vector<std::uint8_t>& train, const NeuronHyperParams& h) {
        return psp_incremental_vs_convolution_check(train, h);
      },
      py::arg("spike_train"), py::arg("hyper"),
      "Max gap between the incremental PSP and the direct kernel convolution.");

  py::class_<SpikeRaster>(m, "SpikeRaster")
      .def(py::init<std::size_t, std::size_t>(), py::arg("num_units"), py::arg("num_steps"))
      .def_static("from_dense", &raster_from_dense, py::arg("array"))
      .def_static(
          "from_events",
          [](std::size_t units, std::size_t steps,
             const std::vector<std::pair<std::uint32_t, std::uint32_t>>& ev) {
            std::vector<SpikeEvent> events;
            for (auto [t, u] : ev) events.push_back({t, u});
            return SpikeRaster::from_events(units, steps, std::move(events));
          },
          py::arg("num_units"), py::arg("num_steps"), py::arg("events"))
      .def_property_readonly("num_units", &SpikeRaster::num_units)
      .def_property_readonly("num_steps", &SpikeRaster::num_steps)
      .def_property_readonly("spike_count", &SpikeRaster::spike_count)
      .def("to_dense", &raster_to_dense)
      .def("events",
           [](const SpikeRaster& r) {
             std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
             for (const auto& e : r.events()) out.emplace_back(e.step, e.unit);
             return out;
           })
      .def("__eq__", [](const SpikeRaster& a, const SpikeRaster& b) { return a == b; })
      .def("__repr__", [](const SpikeRaster& r) {
        return "SpikeRaster(units=" + std::to_string(r.num_units()) +
               ", steps=" + std::to_string(r.num_steps()) +
               ", spikes=" + std::to_string(r.spike_count()) + ")";
      });

  // Data.
  m.def(
      "parse_ts",
      [](const std::string& text, const std::string& missing) {
        ParseOptions o;
        if (missing == "fail") {
          o.missing = MissingPolicy::kFail;
        } else if (missing != "interpolate") {
          throw ConfigError("missing must be 'interpolate' or 'fail'");
        }
        return dataset_dict(parse_ts(text, o));
      },
      py::arg("text"), py::arg("missing") = "interpolate");
  m.def(
      "load_ts_file", [](const std::string& path) { return dataset_dict(load_ts_file(path)); },
      py::arg("path"));
  m.def(
      "serialize_ts",
      [](const py::list& samples, const std::vector<std::size_t>& labels,
         const std::vector<std::string>& class_names, const std::string& name) {
        return serialize_ts(dataset_from(samples, labels, class_names, name));
      },
      py::arg("samples"), py::arg("labels"), py::arg("class_names"), py::arg("name") = "data");

  // Encoding.
  m.def(
      "cuba_encode",
      [](const DenseArray& series, std::size_t population_size, double tau_min, double tau_max,
         std::vector<double> gains, double v_th, std::size_t upsample,
         std::optional<std::size_t> valid_length) {
        PopulationOptions o;
        o.population_size = population_size;
        o.tau_min = tau_min;
        o.tau_max = tau_max;
        o.gain_magnitudes = std::move(gains);
        o.v_th = v_th;
        o.upsample_factor = upsample;
        const auto s = series_from_array(series);
        return cuba_encode(s, build_default_population(s.size(), o), valid_length);
      },
      py::arg("series"), py::arg("population_size") = 5, py::arg("tau_min") = 2.0,
      py::arg("tau_max") = 50.0, py::arg("gain_magnitudes") = std::vector<double>{1.0, 0.5, 0.25},
      py::arg("v_th") = 1.0, py::arg("upsample") = 1, py::arg("valid_length") = py::none(),
      "Population of current-based LIF neurons per channel, channel-major units.");
  m.def(
      "rate_encode",
      [](const DenseArray& series, std::size_t window, std::size_t max_spikes) {
        return rate_encode(series_from_array(series), window, max_spikes);
      },
      py::arg("series"), py::arg("window") = 300, py::arg("max_spikes") = 300,
      "One unit per (channel, sample); values must lie in [0, 1].");
  m.def(
      "coding_stats",
      [](const std::vector<SpikeRaster>& rasters, std::size_t window) {
        const auto s = coding_stats(rasters, window);
        py::dict d;
        d["total_spike_count"] = s.total_spike_count;
        d["mean_spike_rate"] = s.mean_spike_rate;
        d["input_size"] = s.input_size;
        d["samples"] = s.samples;
        return d;
      },
      py::arg("rasters"), py::arg("window") = kRateReportWindow);

  // Networks.
  py::class_<LayerParams>(m, "Layer")
      .def(py::init([](const DenseArray& w, const NeuronHyperParams& h) {
             return LayerParams{matrix_from_array(w), h};
           }),
           py::arg("weights"), py::arg("hyper") = NeuronHyperParams{})
      .def_property(
          "weights", [](const LayerParams& l) { return matrix_to_array(l.weights); },
          [](LayerParams& l, const DenseArray& w) {
            auto m2 = matrix_from_array(w);
            SPIKETS_REQUIRE(m2.same_shape(l.weights), "weights: shape must not change");
            l.weights = std::move(m2);
          })
      .def_readwrite("hyper", &LayerParams::hyper)
      .def_property_readonly("inputs", &LayerParams::inputs)
      .def_property_readonly("outputs", &LayerParams::outputs);

  m.def("init_network", &init_network, py::arg("sizes"), py::arg("hyper") = NeuronHyperParams{},
        py::arg("seed") = 1);
  m.def("layer_sizes", &layer_sizes, py::arg("network"));
  m.def("save_checkpoint", &save_checkpoint_file, py::arg("path"), py::arg("network"));
  m.def("load_checkpoint", &load_checkpoint_file, py::arg("path"));

  m.def(
      "forward",
      [](const Network& net, const SpikeRaster& input, const std::string& mode,
         double temperature) {
        const auto r = forward(net, input, false, StepOptions{parse_mode(mode), temperature});
        return py::make_tuple(r.output_counts, r.output_spikes);
      },
      py::arg("network"), py::arg("input"), py::arg("mode") = "spiking",
      py::arg("temperature") = 1.0,
      "Step-wise simulation. Returns (output_counts, output_raster).");
  m.def(
      "event_forward",
      [](const Network& net, const SpikeRaster& input) {
        const auto r = event_forward(net, input);
        const auto sp = sparsity_report(r.counters, net);
        py::dict c;
        c["synaptic_updates"] = r.counters.synaptic_updates;
        c["neuron_updates"] = r.counters.neuron_updates;
        c["dense_equivalent_macs"] = r.counters.dense_equivalent_macs;
        c["synaptic_ratio"] = sp.synaptic_ratio;
        c["neuron_ratio"] = sp.neuron_ratio;
        return py::make_tuple(r.output_counts, r.output, c);
      },
      py::arg("network"), py::arg("input"),
      "Event-driven simulation. Returns (output_counts, output_raster, counters).");
  m.def("predict_class", [](const std::vector<double>& c) { return predict_class(c); },
        py::arg("output_counts"));

  // Training.
  m.def(
      "train",
      [](const Network& init, const std::vector<SpikeRaster>& rasters,
         const std::vector<std::size_t>& labels, double learning_rate, std::size_t epochs,
         std::size_t batch_size, std::uint64_t seed, const std::string& mode, double temperature,
         double grad_clip) {
        TrainerConfig tc;
        tc.learning_rate = learning_rate;
        tc.epochs = epochs;
        tc.batch_size = batch_size;
        tc.seed = seed;
        tc.mode = parse_mode(mode);
        tc.temperature = temperature;
        tc.grad_clip = grad_clip;
        const auto data = labeled(rasters, labels);
        TrainResult r;
        {
          py::gil_scoped_release release;
          r = train(init, data, {}, tc);
        }
        py::list history;
        for (const auto& h : r.history) history.append(metrics_dict(h));
        return py::make_tuple(r.final_layers, history);
      },
      py::arg("network"), py::arg("rasters"), py::arg("labels"), py::arg("learning_rate") = 1e-4,
      py::arg("epochs") = 100, py::arg("batch_size") = 8, py::arg("seed") = 1,
      py::arg("mode") = "spiking", py::arg("temperature") = 1.0, py::arg("grad_clip") = 0.0,
      "Adam with surrogate-gradient BPTT. Returns (trained_network, history).");
  m.def(
      "evaluate",
      [](const Network& net, const std::vector<SpikeRaster>& rasters,
         const std::vector<std::size_t>& labels) {
        const auto data = labeled(rasters, labels);
        const auto s = evaluate(net, data);
        py::dict d;
        d["loss"] = s.loss;
        d["accuracy"] = s.accuracy;
        d["predictions"] = s.predictions;
        return d;
      },
      py::arg("network"), py::arg("rasters"), py::arg("labels"));
  m.def(
      "gradcheck",
      [](const Network& net, const SpikeRaster& input, std::size_t label, double perturbation,
         double temperature) {
        const auto r = gradcheck_smoothed(net, input, label, perturbation, temperature);
        py::dict d;
        d["max_relative_error"] = r.max_relative_error;
        d["max_abs_gradient"] = r.max_abs_gradient;
        d["weights_checked"] = r.weights_checked;
        d["denominator_floor"] = r.denominator_floor;
        d["entries_below_floor"] = r.entries_below_floor;
        return d;
      },
      py::arg("network"), py::arg("input"), py::arg("label"), py::arg("perturbation") = 1e-5,
      py::arg("temperature") = 1.0,
      "Smoothed-mode BPTT against central finite differences.");

  // Parameter counts.
  m.def("snn_parameter_count", [](const std::vector<std::size_t>& s) {
    return snn_parameter_count(s);
  });
  m.def("lstm_parameter_count", [](const std::vector<std::size_t>& s) {
    return lstm_parameter_count(s);
  });
  m.def("rnn_parameter_count", [](const std::vector<std::size_t>& s) {
    return rnn_parameter_count(s);
  });
}
