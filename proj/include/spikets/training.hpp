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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "spikets/network.hpp"
#include "spikets/numerics.hpp"
#include "spikets/raster.hpp"

namespace spikets {

struct LossOutput {
  double loss = 0.0;
  Vector probs;
  Vector grad_wrt_counts;  // p - onehot(label)
};

// Cross-entropy of softmax(output spike counts) against `label`.
LossOutput loss_and_probs(std::span<const double> output_counts, std::size_t label);

// Sigmoid-derivative surrogate for dU/dV:
//   exp(v_th - v) / (1 + exp(v_th - v))^2
double surrogate_grad(double v, double v_th);

// Per layer, time-major [step * width + unit].
struct BackwardSignals {
  std::vector<Vector> delta;    // dE/dO
  std::vector<Vector> epsilon;  // dO/dV (surrogate or exact sigmoid slope)
  std::vector<Vector> kappa;    // dO[t+1]/dO[t] through the reset path
};

using Gradients = std::vector<Matrix>;

Gradients zero_gradients(const Network& layers);

// Reverse-mode sweep over the recorded unrolled graph. `opts` must match the
// forward pass that produced `history`.
Gradients backward(const ForwardHistory& history, const LossOutput& loss,
                   const Network& layers, const StepOptions& opts = {},
                   BackwardSignals* signals = nullptr);

struct GradcheckResult {
  double max_relative_error = 0.0;
  double max_abs_gradient = 0.0;
  std::size_t weights_checked = 0;
  // Denominator floor for the relative error. A double-precision central
  // difference cannot resolve gradients much below eps * |L| / h, so entries
  // under the floor are judged against the floor instead of their own size.
  double denominator_floor = 0.0;
  std::size_t entries_below_floor = 0;
};

// Floor multiplier in units of eps * max(1, |L|) / (2h). Measured forward
// roundoff stays near 10 such units, so 1e6 keeps the test meaningful at 1e-4.
inline constexpr double kGradcheckFloorUnits = 1e6;

// Compares backward() with central differences of the smoothed-mode loss for
// every weight. Relative error uses max(|analytic|, |numeric|, 1e-8).
GradcheckResult gradcheck_smoothed(const Network& layers, const SpikeRaster& sample,
                                   std::size_t label, double perturbation,
                                   double temperature = 1.0);

struct LabeledRaster {
  SpikeRaster raster;
  std::size_t label = 0;
};

// Index of the output neuron with most spikes; ties go to the lowest index.
std::size_t predict_class(std::span<const double> output_counts);

struct TrainerConfig {
  double learning_rate = 1e-4;
  std::size_t epochs = 100;
  std::size_t batch_size = 8;
  std::uint64_t seed = 1;
  SpikeMode mode = SpikeMode::kSpiking;
  double temperature = 1.0;
  double grad_clip = 0.0;  // global L2 norm; 0 disables
  AdamOptions adam;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  std::optional<double> val_loss;
  std::optional<double> val_acc;
  double wall_time = 0.0;
};

struct TrainResult {
  Network final_layers;
  Network best_layers;  // best validation accuracy (then loss); final if no validation set
  std::size_t best_epoch = 0;
  std::vector<EpochMetrics> history;
};

struct EvalSummary {
  double loss = 0.0;
  double accuracy = 0.0;
  std::vector<std::size_t> predictions;
};

EvalSummary evaluate(const Network& layers, std::span<const LabeledRaster> data,
                     const StepOptions& opts = {});

using EpochCallback = std::function<void(const EpochMetrics&)>;

// Mini-batch BPTT with Adam. Batch gradient is the sum over samples.
// Deterministic for a fixed config.seed.
TrainResult train(const Network& initial, std::span<const LabeledRaster> train_set,
                  std::span<const LabeledRaster> validation_set, const TrainerConfig& config,
                  const EpochCallback& on_epoch = {});

}  // namespace spikets
