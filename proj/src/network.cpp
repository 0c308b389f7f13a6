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

#include "spikets/network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>

#include "neuron_kernel.hpp"
#include "spikets/errors.hpp"
#include "spikets/rng.hpp"

namespace spikets {

NeuronHyperParams::NeuronHyperParams(double tau_m, double tau_s, double tau, double v_th)
    : tau_m_(tau_m), tau_s_(tau_s), tau_(tau), v_th_(v_th) {
  SPIKETS_REQUIRE(std::isfinite(tau_m) && std::isfinite(tau_s) && tau_s > 0.0 && tau_m > tau_s,
                  "NeuronHyperParams: need tau_m > tau_s > 0");
  SPIKETS_REQUIRE(std::isfinite(tau) && tau > 0.0, "NeuronHyperParams: need tau > 0");
  SPIKETS_REQUIRE(std::isfinite(v_th) && v_th > 0.0, "NeuronHyperParams: need v_th > 0");
  alpha_ = std::exp(-1.0 / tau_m);
  beta_ = std::exp(-1.0 / tau_s);
  gamma_ = std::exp(-1.0 / tau);
  eta_ = tau_m / tau_s;
  // eta^(eta/(eta-1)) alone leaves the peak at eta - 1; divide it out.
  v0_ = std::pow(eta_, eta_ / (eta_ - 1.0)) / (eta_ - 1.0);
}

double NeuronHyperParams::peak_time() const {
  return std::log(eta_) * tau_m_ * tau_s_ / (tau_m_ - tau_s_);
}

double kernel_value(double t, const NeuronHyperParams& hyper) {
  SPIKETS_REQUIRE(t >= 0.0, "kernel_value: negative time");
  return hyper.v0() * (std::exp(-t / hyper.tau_m()) - std::exp(-t / hyper.tau_s()));
}

double srm_reference_potential(const std::vector<std::vector<double>>& input_spike_times,
                               std::span<const double> output_spike_times,
                               std::span<const double> weights, double t,
                               const NeuronHyperParams& hyper) {
  SPIKETS_REQUIRE(input_spike_times.size() == weights.size(),
                  "srm_reference_potential: one weight per synapse required");
  double v = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double psp = 0.0;
    for (double tj : input_spike_times[i]) {
      if (tj < t) psp += kernel_value(t - tj, hyper);
    }
    v += weights[i] * psp;
  }
  double reset = 0.0;
  for (double ts : output_spike_times) {
    if (ts < t) reset += std::exp(-(t - ts) / hyper.tau());
  }
  return v - hyper.v_th() * reset;
}

double psp_incremental_vs_convolution_check(std::span<const std::uint8_t> spike_train,
                                            const NeuronHyperParams& hyper) {
  double m = 0.0, h = 0.0, worst = 0.0;
  std::vector<std::size_t> spikes;
  for (std::size_t t = 0; t < spike_train.size(); ++t) {
    const double s = spike_train[t] ? 1.0 : 0.0;
    m = hyper.alpha() * m + s;
    h = hyper.beta() * h + s;
    if (spike_train[t]) spikes.push_back(t);
    double direct = 0.0;
    for (std::size_t ti : spikes) direct += kernel_value(static_cast<double>(t - ti), hyper);
    worst = std::max(worst, std::abs(hyper.v0() * (m - h) - direct));
  }
  return worst;
}

LayerState::LayerState(std::size_t inputs, std::size_t outputs)
    : m_trace(inputs, 0.0),
      h_trace(inputs, 0.0),
      a_current(outputs, 0.0),
      b_current(outputs, 0.0),
      r_trace(outputs, 0.0),
      v(outputs, 0.0),
      o(outputs, 0.0) {}

void LayerState::reset() {
  for (Vector* x : {&m_trace, &h_trace, &a_current, &b_current, &r_trace, &v, &o}) {
    std::fill(x->begin(), x->end(), 0.0);
  }
}

void layer_step(const LayerParams& params, LayerState& state,
                std::span<const double> input, const StepOptions& opts) {
  const std::size_t n_in = params.inputs();
  const std::size_t n_out = params.outputs();
  SPIKETS_REQUIRE(input.size() == n_in, "layer_step: input width " +
                                            std::to_string(input.size()) + " != layer fan-in " +
                                            std::to_string(n_in));
  SPIKETS_REQUIRE(state.m_trace.size() == n_in && state.v.size() == n_out,
                  "layer_step: state does not match layer shape");
  const auto& hp = params.hyper;
  const double alpha = hp.alpha(), beta = hp.beta(), gamma = hp.gamma();
  const double v0 = hp.v0(), v_th = hp.v_th();

  thread_local std::vector<std::size_t> active;
  active.clear();
  for (std::size_t j = 0; j < n_in; ++j) {
    state.m_trace[j] = alpha * state.m_trace[j] + input[j];
    state.h_trace[j] = beta * state.h_trace[j] + input[j];
    if (input[j] != 0.0) active.push_back(j);
  }

  for (std::size_t i = 0; i < n_out; ++i) {
    const auto w = params.weights.row(i);
    double a = state.a_current[i] * alpha;
    double b = state.b_current[i] * beta;
    for (std::size_t j : active) {
      const double x = w[j] * input[j];
      a += x;
      b += x;
    }
    state.a_current[i] = a;
    state.b_current[i] = b;

    const double r = detail::decay_reset_trace(state.r_trace[i], state.o[i], gamma);
    state.r_trace[i] = r;
    const double v = detail::membrane_potential(a, b, r, v0, v_th);
    state.v[i] = v;
    if (opts.mode == SpikeMode::kSpiking) {
      state.o[i] = detail::fires(v, v_th) ? 1.0 : 0.0;
    } else {
      state.o[i] = detail::logistic((v - v_th) / opts.temperature);
    }
  }
}

void check_architecture(const Network& layers) {
  SPIKETS_REQUIRE(!layers.empty(), "network has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    SPIKETS_REQUIRE(layers[l].weights.rows() > 0 && layers[l].weights.cols() > 0,
                    "layer " + std::to_string(l) + " has an empty weight matrix");
    if (l > 0) {
      SPIKETS_REQUIRE(layers[l].inputs() == layers[l - 1].outputs(),
                      "layer " + std::to_string(l) + " fan-in " +
                          std::to_string(layers[l].inputs()) + " != previous width " +
                          std::to_string(layers[l - 1].outputs()));
    }
  }
}

std::vector<std::size_t> layer_sizes(const Network& layers) {
  std::vector<std::size_t> sizes;
  if (layers.empty()) return sizes;
  sizes.push_back(layers.front().inputs());
  for (const auto& l : layers) sizes.push_back(l.outputs());
  return sizes;
}

namespace {

ForwardResult run_forward(const Network& layers, std::size_t num_steps,
                          const std::function<void(std::size_t, Vector&)>& fill_input,
                          bool record, const StepOptions& opts) {
  check_architecture(layers);
  const std::size_t depth = layers.size();
  std::vector<LayerState> states;
  states.reserve(depth);
  for (const auto& l : layers) states.emplace_back(l.inputs(), l.outputs());

  ForwardResult result;
  const std::size_t n_out = layers.back().outputs();
  result.output_counts.assign(n_out, 0.0);
  std::vector<SpikeEvent> out_events;

  if (record) {
    ForwardHistory h;
    h.num_steps = num_steps;
    for (const auto& l : layers) {
      h.widths.push_back(l.outputs());
      h.input_widths.push_back(l.inputs());
      h.input.emplace_back(num_steps * l.inputs());
      h.m_trace.emplace_back(num_steps * l.inputs());
      h.h_trace.emplace_back(num_steps * l.inputs());
      h.r_trace.emplace_back(num_steps * l.outputs());
      h.v.emplace_back(num_steps * l.outputs());
      h.o.emplace_back(num_steps * l.outputs());
    }
    result.history = std::move(h);
  }

  Vector input(layers.front().inputs());
  for (std::size_t t = 0; t < num_steps; ++t) {
    fill_input(t, input);
    std::span<const double> layer_in = input;
    for (std::size_t l = 0; l < depth; ++l) {
      auto& st = states[l];
      layer_step(layers[l], st, layer_in, opts);
      if (record) {
        auto& h = *result.history;
        const std::size_t ni = layers[l].inputs(), no = layers[l].outputs();
        std::copy(layer_in.begin(), layer_in.end(), h.input[l].begin() + t * ni);
        std::copy(st.m_trace.begin(), st.m_trace.end(), h.m_trace[l].begin() + t * ni);
        std::copy(st.h_trace.begin(), st.h_trace.end(), h.h_trace[l].begin() + t * ni);
        std::copy(st.r_trace.begin(), st.r_trace.end(), h.r_trace[l].begin() + t * no);
        std::copy(st.v.begin(), st.v.end(), h.v[l].begin() + t * no);
        std::copy(st.o.begin(), st.o.end(), h.o[l].begin() + t * no);
      }
      layer_in = st.o;
    }
    const auto& out = states.back().o;
    for (std::size_t i = 0; i < n_out; ++i) {
      result.output_counts[i] += out[i];
      if (opts.mode == SpikeMode::kSpiking && out[i] != 0.0) {
        out_events.push_back({static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(i)});
      }
    }
    for (double c : result.output_counts) {
      if (!std::isfinite(c)) throw NumericError("forward: non-finite output");
    }
  }
  result.output_spikes = SpikeRaster::from_events(n_out, num_steps, std::move(out_events));
  return result;
}

}  // namespace

ForwardResult forward(const Network& layers, const SpikeRaster& input, bool record,
                      const StepOptions& opts) {
  check_architecture(layers);
  SPIKETS_REQUIRE(input.num_units() == layers.front().inputs(),
                  "forward: raster has " + std::to_string(input.num_units()) +
                      " units, network expects " + std::to_string(layers.front().inputs()));
  const auto& events = input.events();
  std::size_t cursor = 0;
  auto fill = [&](std::size_t t, Vector& x) {
    std::fill(x.begin(), x.end(), 0.0);
    while (cursor < events.size() && events[cursor].step == t) {
      x[events[cursor].unit] = 1.0;
      ++cursor;
    }
  };
  return run_forward(layers, input.num_steps(), fill, record, opts);
}

ForwardResult forward_dense(const Network& layers, const std::vector<Vector>& input,
                            bool record, const StepOptions& opts) {
  check_architecture(layers);
  for (const auto& x : input) {
    SPIKETS_REQUIRE(x.size() == layers.front().inputs(),
                    "forward_dense: input width does not match network");
  }
  auto fill = [&](std::size_t t, Vector& x) { x = input[t]; };
  return run_forward(layers, input.size(), fill, record, opts);
}

Network init_network(const std::vector<std::size_t>& sizes,
                     const NeuronHyperParams& hyper, std::uint64_t seed) {
  SPIKETS_REQUIRE(sizes.size() >= 2, "init_network: need at least input and output sizes");
  Rng rng(seed);
  Network net;
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    SPIKETS_REQUIRE(sizes[l - 1] > 0 && sizes[l] > 0, "init_network: zero layer width");
    const double k = std::sqrt(6.0 / static_cast<double>(sizes[l - 1] + sizes[l]));
    Matrix w(sizes[l], sizes[l - 1]);
    for (double& x : w.data()) x = rng.uniform(-k, k);
    net.push_back({std::move(w), hyper});
  }
  return net;
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[8] = {'S', 'P', 'K', 'T', 'N', 'E', 'T', '\0'};
constexpr std::uint32_t kCheckpointVersion = 1;

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value{};
  if (!is.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw DataError("checkpoint: unexpected end of file");
  }
  return value;
}

}  // namespace

void save_checkpoint(std::ostream& os, const Network& layers) {
  check_architecture(layers);
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, kCheckpointVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(layers.size()));
  for (const auto& l : layers) {
    put<std::uint64_t>(os, l.weights.rows());
    put<std::uint64_t>(os, l.weights.cols());
    put<double>(os, l.hyper.tau_m());
    put<double>(os, l.hyper.tau_s());
    put<double>(os, l.hyper.tau());
    put<double>(os, l.hyper.v_th());
    const auto d = l.weights.data();
    os.write(reinterpret_cast<const char*>(d.data()),
             static_cast<std::streamsize>(d.size() * sizeof(double)));
  }
  if (!os) throw DataError("checkpoint: write failed");
}

Network load_checkpoint(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("checkpoint: bad magic (not a spikets network file)");
  }
  const auto version = get<std::uint32_t>(is);
  if (version != kCheckpointVersion) {
    throw DataError("checkpoint: unsupported version " + std::to_string(version));
  }
  const auto depth = get<std::uint32_t>(is);
  if (depth == 0 || depth > 1024) throw DataError("checkpoint: implausible layer count");
  Network net;
  for (std::uint32_t l = 0; l < depth; ++l) {
    const auto rows = get<std::uint64_t>(is);
    const auto cols = get<std::uint64_t>(is);
    if (rows == 0 || cols == 0 || rows > (1u << 20) || cols > (1u << 20)) {
      throw DataError("checkpoint: implausible layer shape");
    }
    const double tau_m = get<double>(is), tau_s = get<double>(is);
    const double tau = get<double>(is), v_th = get<double>(is);
    std::vector<double> w(rows * cols);
    if (!is.read(reinterpret_cast<char*>(w.data()),
                 static_cast<std::streamsize>(w.size() * sizeof(double)))) {
      throw DataError("checkpoint: truncated weights in layer " + std::to_string(l));
    }
    try {
      net.push_back({Matrix(rows, cols, std::move(w)), NeuronHyperParams(tau_m, tau_s, tau, v_th)});
    } catch (const ContractError& e) {
      throw DataError(std::string("checkpoint: ") + e.what());
    }
  }
  try {
    check_architecture(net);
  } catch (const ContractError& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
  for (const auto& l : net) {
    if (!l.weights.all_finite()) throw DataError("checkpoint: non-finite weight");
  }
  return net;
}

void save_checkpoint_file(const std::string& path, const Network& layers) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot open '" + path + "' for writing");
  save_checkpoint(os, layers);
}

Network load_checkpoint_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint '" + path + "'");
  return load_checkpoint(is);
}

}  // namespace spikets
