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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spikets/numerics.hpp"
#include "spikets/raster.hpp"

namespace spikets {

// Time constants of the double-exponential PSP kernel and the reset trace.
// All derived decay factors are per unit time step.
class NeuronHyperParams {
 public:
  NeuronHyperParams() : NeuronHyperParams(20.0, 5.0, 20.0, 1.0) {}
  NeuronHyperParams(double tau_m, double tau_s, double tau, double v_th);

  double tau_m() const { return tau_m_; }
  double tau_s() const { return tau_s_; }
  double tau() const { return tau_; }
  double v_th() const { return v_th_; }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double eta() const { return eta_; }
  // Normalization that puts the kernel peak at exactly 1.
  double v0() const { return v0_; }
  // Time of the kernel maximum.
  double peak_time() const;

  friend bool operator==(const NeuronHyperParams&, const NeuronHyperParams&) = default;

 private:
  double tau_m_, tau_s_, tau_, v_th_;
  double alpha_, beta_, gamma_, eta_, v0_;
};

// K(t) = v0 * (exp(-t/tau_m) - exp(-t/tau_s)), t >= 0.
double kernel_value(double t, const NeuronHyperParams& hyper);

// Direct-convolution membrane potential at time t:
//   sum_i w_i sum_{t_j < t} K(t - t_j) - v_th sum_{t_s < t} exp(-(t - t_s)/tau)
// Slow; used as a test oracle for the step-wise model.
double srm_reference_potential(const std::vector<std::vector<double>>& input_spike_times,
                               std::span<const double> output_spike_times,
                               std::span<const double> weights, double t,
                               const NeuronHyperParams& hyper);

// max_t |v0 (M[t] - H[t]) - sum_{t_i <= t} K(t - t_i)| over a binary train.
double psp_incremental_vs_convolution_check(std::span<const std::uint8_t> spike_train,
                                            const NeuronHyperParams& hyper);

struct LayerParams {
  Matrix weights;  // [N_l x N_{l-1}]
  NeuronHyperParams hyper;

  std::size_t inputs() const { return weights.cols(); }
  std::size_t outputs() const { return weights.rows(); }
};

// Per-layer dynamic state. m/h are per presynaptic input; the synaptic
// aggregates a = W m and b = W h are carried per postsynaptic neuron so the
// input current is I = v0 (a - b).
struct LayerState {
  Vector m_trace;
  Vector h_trace;
  Vector a_current;
  Vector b_current;
  Vector r_trace;
  Vector v;
  Vector o;

  LayerState() = default;
  LayerState(std::size_t inputs, std::size_t outputs);
  void reset();
};

// Output nonlinearity. kSpiking: o = [V >= v_th]. kSmoothed: o =
// sigmoid((V - v_th) / temperature), used for exact gradient checks.
enum class SpikeMode { kSpiking, kSmoothed };

struct StepOptions {
  SpikeMode mode = SpikeMode::kSpiking;
  double temperature = 1.0;
};

// Advances one layer by one time step given this step's input activity.
// Order: traces decay and take the input, reset trace decays and takes the
// previous output, then V = v0 (a - b) - v_th r and o = f(V).
void layer_step(const LayerParams& params, LayerState& state,
                std::span<const double> input, const StepOptions& opts = {});

// Snapshots of everything backpropagation needs, time-major per layer:
// field[layer][step * width + unit].
struct ForwardHistory {
  std::size_t num_steps = 0;
  std::vector<std::size_t> widths;  // N_l per layer
  std::vector<std::size_t> input_widths;
  std::vector<Vector> input;  // layer input activity s (N_{l-1})
  std::vector<Vector> m_trace;
  std::vector<Vector> h_trace;
  std::vector<Vector> r_trace;
  std::vector<Vector> v;
  std::vector<Vector> o;

  std::size_t num_layers() const { return widths.size(); }
};

struct ForwardResult {
  Vector output_counts;  // sum_t O^L[t]
  SpikeRaster output_spikes;  // spiking mode only
  std::optional<ForwardHistory> history;
};

using Network = std::vector<LayerParams>;

void check_architecture(const Network& layers);
std::vector<std::size_t> layer_sizes(const Network& layers);

ForwardResult forward(const Network& layers, const SpikeRaster& input, bool record,
                      const StepOptions& opts = {});
// Dense-input variant (graded inputs allowed); input is [step][unit].
ForwardResult forward_dense(const Network& layers, const std::vector<Vector>& input,
                            bool record, const StepOptions& opts = {});

// Uniform(-k, k) with k = sqrt(6 / (fan_in + fan_out)).
Network init_network(const std::vector<std::size_t>& sizes,
                     const NeuronHyperParams& hyper, std::uint64_t seed);

// Checkpoint file: little-endian binary, see docs/formats.md.
void save_checkpoint(std::ostream& os, const Network& layers);
Network load_checkpoint(std::istream& is);
void save_checkpoint_file(const std::string& path, const Network& layers);
Network load_checkpoint_file(const std::string& path);

}  // namespace spikets
