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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spikets/network.hpp"
#include "spikets/raster.hpp"

namespace spikets {

// Powers of the three decay factors, built by repeated multiplication so
// entry k is exactly entry k-1 times the factor.
struct DecayLUT {
  Vector alpha_pow;
  Vector beta_pow;
  Vector gamma_pow;
  std::size_t horizon = 0;  // first k where all three powers are < tolerance
};

DecayLUT build_lut(const NeuronHyperParams& hyper, double tolerance = 1e-12);

// x * factor^dt using the table; dt beyond the horizon is composed from
// horizon-sized jumps.
double lut_decay(double x, const Vector& powers, std::size_t dt);

struct OpCounters {
  std::uint64_t synaptic_updates = 0;      // weight-column adds from input events
  std::uint64_t neuron_updates = 0;        // per-neuron decay + threshold checks
  std::uint64_t dense_equivalent_macs = 0; // T * sum_l N_{l-1} N_l

  OpCounters& operator+=(const OpCounters& o) {
    synaptic_updates += o.synaptic_updates;
    neuron_updates += o.neuron_updates;
    dense_equivalent_macs += o.dense_equivalent_macs;
    return *this;
  }
};

struct EventOptions {
  double lut_tolerance = 1e-12;
  // Lossy: zero a neuron's state once every component is below the
  // tolerance, letting it go quiescent. Off for exact equivalence.
  bool truncate = false;
};

struct EventResult {
  SpikeRaster output;
  Vector output_counts;
  std::vector<SpikeRaster> layer_outputs;
  OpCounters counters;
};

// Event-driven simulation of the step-wise network. Each neuron keeps
// aggregated traces a = sum_j w_ij M_j, b = sum_j w_ij H_j and r; input
// events add weight columns, decay is applied through the LUT by the steps
// elapsed since the neuron's last update, and quiescent neurons (all-zero
// state, no input) are skipped. Output spike trains equal forward()'s.
class EventEngine {
 public:
  explicit EventEngine(const Network& layers, EventOptions opts = {});

  EventResult run(const SpikeRaster& input);
  const std::vector<DecayLUT>& luts() const { return luts_; }

 private:
  struct NeuronState {
    double a = 0.0;
    double b = 0.0;
    double r = 0.0;
    double o_prev = 0.0;
    std::uint32_t last_update = 0;
  };

  const Network& layers_;
  EventOptions opts_;
  std::vector<DecayLUT> luts_;
  std::vector<std::vector<NeuronState>> state_;
};

EventResult event_forward(const Network& layers, const SpikeRaster& input,
                          const EventOptions& opts = {});

// The event-driven pseudocode taken verbatim (per-synapse M/H with elapsed
// counters, V rebuilt from the synapses active this step, strict threshold,
// subtractive reset, R never feeding back). Kept for comparison; it does not
// reproduce the step-wise model.
EventResult event_forward_literal(const Network& layers, const SpikeRaster& input);

struct SparsityReport {
  OpCounters counters;
  double synaptic_ratio = 0.0;  // synaptic_updates / dense_equivalent_macs
  double neuron_ratio = 0.0;    // neuron_updates / dense_equivalent_macs
  std::uint64_t snn_parameters = 0;
};

SparsityReport sparsity_report(const OpCounters& counters, const Network& layers);

// Analytic parameter counts for comparison tables. `sizes` is
// input-hidden...-output. Recurrent layers carry two bias vectors (input and
// hidden), the output layer is dense with bias.
std::uint64_t snn_parameter_count(std::span<const std::size_t> sizes);
std::uint64_t lstm_parameter_count(std::span<const std::size_t> sizes);
std::uint64_t rnn_parameter_count(std::span<const std::size_t> sizes);

}  // namespace spikets
