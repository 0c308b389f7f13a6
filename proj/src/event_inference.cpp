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

#include "spikets/event_inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "neuron_kernel.hpp"
#include "spikets/errors.hpp"

namespace spikets {

DecayLUT build_lut(const NeuronHyperParams& hyper, double tolerance) {
  SPIKETS_REQUIRE(tolerance > 0.0 && tolerance < 1.0, "build_lut: tolerance must be in (0, 1)");
  DecayLUT lut;
  double a = 1.0, b = 1.0, g = 1.0;
  lut.alpha_pow.push_back(a);
  lut.beta_pow.push_back(b);
  lut.gamma_pow.push_back(g);
  while (!(a < tolerance && b < tolerance && g < tolerance)) {
    a *= hyper.alpha();
    b *= hyper.beta();
    g *= hyper.gamma();
    lut.alpha_pow.push_back(a);
    lut.beta_pow.push_back(b);
    lut.gamma_pow.push_back(g);
  }
  lut.horizon = lut.alpha_pow.size() - 1;
  return lut;
}

double lut_decay(double x, const Vector& powers, std::size_t dt) {
  const std::size_t h = powers.size() - 1;
  while (dt > h) {
    x *= powers[h];
    dt -= h;
  }
  return x * powers[dt];
}

EventEngine::EventEngine(const Network& layers, EventOptions opts)
    : layers_(layers), opts_(opts) {
  check_architecture(layers_);
  for (const auto& l : layers_) {
    luts_.push_back(build_lut(l.hyper, opts_.lut_tolerance));
  }
}

EventResult EventEngine::run(const SpikeRaster& input) {
  SPIKETS_REQUIRE(input.num_units() == layers_.front().inputs(),
                  "event_forward: raster has " + std::to_string(input.num_units()) +
                      " units, network expects " + std::to_string(layers_.front().inputs()));
  const std::size_t depth = layers_.size();
  const std::size_t steps = input.num_steps();
  state_.assign(depth, {});
  for (std::size_t l = 0; l < depth; ++l) state_[l].assign(layers_[l].outputs(), {});

  EventResult result;
  std::vector<std::vector<SpikeEvent>> layer_events(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    result.counters.dense_equivalent_macs +=
        static_cast<std::uint64_t>(steps) * layers_[l].inputs() * layers_[l].outputs();
  }

  const auto& in_events = input.events();
  std::size_t cursor = 0;
  std::vector<std::uint32_t> incoming, outgoing;

  for (std::size_t t = 0; t < steps; ++t) {
    incoming.clear();
    while (cursor < in_events.size() && in_events[cursor].step == t) {
      incoming.push_back(in_events[cursor].unit);
      ++cursor;
    }
    const auto step = static_cast<std::uint32_t>(t);
    for (std::size_t l = 0; l < depth; ++l) {
      const auto& layer = layers_[l];
      const auto& hp = layer.hyper;
      const auto& lut = luts_[l];
      const double v0 = hp.v0(), v_th = hp.v_th();
      auto& neurons = state_[l];
      outgoing.clear();
      result.counters.synaptic_updates +=
          static_cast<std::uint64_t>(incoming.size()) * layer.outputs();

      for (std::size_t i = 0; i < neurons.size(); ++i) {
        auto& n = neurons[i];
        const bool quiescent = n.a == 0.0 && n.b == 0.0 && n.r == 0.0 && n.o_prev == 0.0;
        if (quiescent && incoming.empty()) continue;

        // Live neurons are touched every step, so dt is 1 for them; longer
        // jumps only happen across quiescent (all-zero) stretches.
        const std::size_t dt = t - n.last_update;
        double a = lut_decay(n.a, lut.alpha_pow, dt);
        double b = lut_decay(n.b, lut.beta_pow, dt);
        if (!incoming.empty()) {
          const auto w = layer.weights.row(i);
          for (std::uint32_t j : incoming) {
            a += w[j];
            b += w[j];
          }
        }
        const double r = lut_decay(n.r + n.o_prev, lut.gamma_pow, dt);
        const double v = detail::membrane_potential(a, b, r, v0, v_th);
        ++result.counters.neuron_updates;

        const bool spike = detail::fires(v, v_th);
        n.a = a;
        n.b = b;
        n.r = r;
        n.o_prev = spike ? 1.0 : 0.0;
        n.last_update = step;
        if (spike) {
          outgoing.push_back(static_cast<std::uint32_t>(i));
        } else if (opts_.truncate) {
          const double tol = opts_.lut_tolerance;
          if (std::abs(a) < tol && std::abs(b) < tol && r < tol) n.a = n.b = n.r = 0.0;
        }
      }
      for (std::uint32_t i : outgoing) layer_events[l].push_back({step, i});
      incoming.swap(outgoing);
    }
  }

  for (std::size_t l = 0; l < depth; ++l) {
    result.layer_outputs.push_back(
        SpikeRaster::from_events(layers_[l].outputs(), steps, std::move(layer_events[l])));
  }
  result.output = result.layer_outputs.back();
  result.output_counts.assign(layers_.back().outputs(), 0.0);
  for (const auto& e : result.output.events()) result.output_counts[e.unit] += 1.0;
  return result;
}

EventResult event_forward(const Network& layers, const SpikeRaster& input,
                          const EventOptions& opts) {
  EventEngine engine(layers, opts);
  return engine.run(input);
}

EventResult event_forward_literal(const Network& layers, const SpikeRaster& input) {
  check_architecture(layers);
  SPIKETS_REQUIRE(input.num_units() == layers.front().inputs(),
                  "event_forward_literal: raster/network width mismatch");
  const std::size_t depth = layers.size();
  const std::size_t steps = input.num_steps();

  struct LayerLiteral {
    Vector m, h;
    std::vector<std::size_t> d_in;
    Vector r;
    std::vector<std::size_t> d_out;
  };
  std::vector<LayerLiteral> st(depth);
  std::vector<DecayLUT> luts;
  for (std::size_t l = 0; l < depth; ++l) {
    st[l].m.assign(layers[l].inputs(), 0.0);
    st[l].h.assign(layers[l].inputs(), 0.0);
    st[l].d_in.assign(layers[l].inputs(), 0);
    st[l].r.assign(layers[l].outputs(), 0.0);
    st[l].d_out.assign(layers[l].outputs(), 0);
    luts.push_back(build_lut(layers[l].hyper));
  }

  EventResult result;
  std::vector<std::vector<SpikeEvent>> layer_events(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    result.counters.dense_equivalent_macs +=
        static_cast<std::uint64_t>(steps) * layers[l].inputs() * layers[l].outputs();
  }
  const auto& in_events = input.events();
  std::size_t cursor = 0;
  std::vector<std::uint32_t> incoming, outgoing;
  for (std::size_t t = 0; t < steps; ++t) {
    incoming.clear();
    while (cursor < in_events.size() && in_events[cursor].step == t) {
      incoming.push_back(in_events[cursor].unit);
      ++cursor;
    }
    for (std::size_t l = 0; l < depth; ++l) {
      auto& s = st[l];
      const auto& hp = layers[l].hyper;
      const auto& lut = luts[l];
      outgoing.clear();
      if (incoming.empty()) {
        for (auto& d : s.d_in) ++d;
        for (auto& d : s.d_out) ++d;
        incoming.swap(outgoing);
        continue;
      }
      std::vector<bool> active(layers[l].inputs(), false);
      for (auto j : incoming) active[j] = true;
      for (std::size_t j = 0; j < active.size(); ++j) {
        if (active[j]) {
          s.m[j] = lut_decay(s.m[j], lut.alpha_pow, s.d_in[j]) + 1.0;
          s.h[j] = lut_decay(s.h[j], lut.beta_pow, s.d_in[j]) + 1.0;
          s.d_in[j] = 0;
        } else {
          ++s.d_in[j];
        }
      }
      for (std::size_t i = 0; i < layers[l].outputs(); ++i) {
        const auto w = layers[l].weights.row(i);
        double v = 0.0;
        for (auto j : incoming) v += hp.v0() * w[j] * (s.m[j] - s.h[j]);
        result.counters.synaptic_updates += incoming.size();
        ++result.counters.neuron_updates;
        if (v > hp.v_th()) {
          s.d_out[i] = 0;
          s.r[i] = lut_decay(s.r[i], lut.gamma_pow, s.d_out[i]) + hp.v_th();
          outgoing.push_back(static_cast<std::uint32_t>(i));
        } else {
          ++s.d_out[i];
        }
      }
      for (auto i : outgoing) {
        layer_events[l].push_back({static_cast<std::uint32_t>(t), i});
      }
      incoming.swap(outgoing);
    }
  }
  for (std::size_t l = 0; l < depth; ++l) {
    result.layer_outputs.push_back(
        SpikeRaster::from_events(layers[l].outputs(), steps, std::move(layer_events[l])));
  }
  result.output = result.layer_outputs.back();
  result.output_counts.assign(layers.back().outputs(), 0.0);
  for (const auto& e : result.output.events()) result.output_counts[e.unit] += 1.0;
  return result;
}

SparsityReport sparsity_report(const OpCounters& counters, const Network& layers) {
  SparsityReport r;
  r.counters = counters;
  if (counters.dense_equivalent_macs > 0) {
    const double dense = static_cast<double>(counters.dense_equivalent_macs);
    r.synaptic_ratio = static_cast<double>(counters.synaptic_updates) / dense;
    r.neuron_ratio = static_cast<double>(counters.neuron_updates) / dense;
  }
  const auto sizes = layer_sizes(layers);
  r.snn_parameters = snn_parameter_count(sizes);
  return r;
}

std::uint64_t snn_parameter_count(std::span<const std::size_t> sizes) {
  std::uint64_t n = 0;
  for (std::size_t l = 1; l < sizes.size(); ++l) n += sizes[l - 1] * sizes[l];
  return n;
}

namespace {

std::uint64_t recurrent_count(std::span<const std::size_t> sizes, std::uint64_t gates) {
  SPIKETS_REQUIRE(sizes.size() >= 2, "parameter count needs input and output sizes");
  std::uint64_t n = 0;
  for (std::size_t l = 1; l + 1 < sizes.size(); ++l) {
    const std::uint64_t in = sizes[l - 1], hid = sizes[l];
    n += gates * (hid * in + hid * hid + 2 * hid);
  }
  const std::uint64_t last_in = sizes[sizes.size() - 2], out = sizes.back();
  return n + last_in * out + out;
}

}  // namespace

std::uint64_t lstm_parameter_count(std::span<const std::size_t> sizes) {
  return recurrent_count(sizes, 4);
}

std::uint64_t rnn_parameter_count(std::span<const std::size_t> sizes) {
  return recurrent_count(sizes, 1);
}

}  // namespace spikets
