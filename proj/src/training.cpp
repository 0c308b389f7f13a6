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

#include "spikets/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "neuron_kernel.hpp"
#include "spikets/errors.hpp"
#include "spikets/rng.hpp"

namespace spikets {

LossOutput loss_and_probs(std::span<const double> output_counts, std::size_t label) {
  SPIKETS_REQUIRE(!output_counts.empty(), "loss_and_probs: empty output counts");
  SPIKETS_REQUIRE(label < output_counts.size(),
                  "loss_and_probs: label " + std::to_string(label) + " >= class count " +
                      std::to_string(output_counts.size()));
  LossOutput out;
  out.probs = softmax(output_counts);
  // log p_label via log-sum-exp, stable for large count gaps.
  const double peak = *std::max_element(output_counts.begin(), output_counts.end());
  double total = 0.0;
  for (double c : output_counts) total += std::exp(c - peak);
  out.loss = -(output_counts[label] - peak - std::log(total));
  out.grad_wrt_counts = out.probs;
  out.grad_wrt_counts[label] -= 1.0;
  return out;
}

double surrogate_grad(double v, double v_th) {
  const double e = std::exp(-std::abs(v_th - v));
  const double d = 1.0 + e;
  return e / (d * d);
}

Gradients zero_gradients(const Network& layers) {
  Gradients g;
  g.reserve(layers.size());
  for (const auto& l : layers) g.emplace_back(l.weights.rows(), l.weights.cols());
  return g;
}

namespace {

double output_slope(double v, double v_th, const StepOptions& opts) {
  if (opts.mode == SpikeMode::kSpiking) return surrogate_grad(v, v_th);
  const double s = detail::logistic((v - v_th) / opts.temperature);
  return s * (1.0 - s) / opts.temperature;
}

}  // namespace

Gradients backward(const ForwardHistory& history, const LossOutput& loss,
                   const Network& layers, const StepOptions& opts,
                   BackwardSignals* signals) {
  check_architecture(layers);
  const std::size_t depth = layers.size();
  const std::size_t steps = history.num_steps;
  SPIKETS_REQUIRE(history.num_layers() == depth, "backward: history depth mismatch");
  for (std::size_t l = 0; l < depth; ++l) {
    SPIKETS_REQUIRE(history.widths[l] == layers[l].outputs() &&
                        history.input_widths[l] == layers[l].inputs() &&
                        history.v[l].size() == steps * layers[l].outputs(),
                    "backward: history does not match layer " + std::to_string(l));
  }
  SPIKETS_REQUIRE(loss.grad_wrt_counts.size() == layers.back().outputs(),
                  "backward: loss gradient width mismatch");

  if (signals) {
    signals->delta.assign(depth, {});
    signals->epsilon.assign(depth, {});
    signals->kappa.assign(depth, {});
    for (std::size_t l = 0; l < depth; ++l) {
      const std::size_t n = steps * layers[l].outputs();
      signals->delta[l].assign(n, 0.0);
      signals->epsilon[l].assign(n, 0.0);
      signals->kappa[l].assign(n, 0.0);
    }
  }

  // dE/dV per layer, time-major; reduced into weight gradients at the end.
  std::vector<Vector> grad_v(depth);
  std::vector<Vector> carry_m(depth), carry_h(depth), carry_r(depth), carry_o(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    grad_v[l].assign(steps * layers[l].outputs(), 0.0);
    carry_m[l].assign(layers[l].inputs(), 0.0);
    carry_h[l].assign(layers[l].inputs(), 0.0);
    carry_r[l].assign(layers[l].outputs(), 0.0);
    carry_o[l].assign(layers[l].outputs(), 0.0);
  }
  Vector from_above;  // dE/ds^{l+1}_t == dE/dO^l_t contribution from the next layer
  Vector grad_x;

  for (std::size_t t = steps; t-- > 0;) {
    for (std::size_t l = depth; l-- > 0;) {
      const auto& layer = layers[l];
      const auto& hp = layer.hyper;
      const std::size_t n_out = layer.outputs();
      const std::size_t n_in = layer.inputs();
      const double* v = history.v[l].data() + t * n_out;
      double* gv = grad_v[l].data() + t * n_out;
      const bool is_output = (l + 1 == depth);

      for (std::size_t i = 0; i < n_out; ++i) {
        const double go = carry_o[l][i] +
                          (is_output ? loss.grad_wrt_counts[i] : from_above[i]);
        const double eps = output_slope(v[i], hp.v_th(), opts);
        const double g = go * eps;
        gv[i] = g;
        // V = I - v_th r;  r_t = gamma (r_{t-1} + o_{t-1})
        const double gr = carry_r[l][i] - hp.v_th() * g;
        carry_r[l][i] = hp.gamma() * gr;
        carry_o[l][i] = hp.gamma() * gr;
        if (signals) {
          signals->delta[l][t * n_out + i] = go;
          signals->epsilon[l][t * n_out + i] = eps;
        }
      }
      if (signals && t + 1 < steps) {
        for (std::size_t i = 0; i < n_out; ++i) {
          signals->kappa[l][t * n_out + i] =
              -hp.v_th() * hp.gamma() * signals->epsilon[l][(t + 1) * n_out + i];
        }
      }

      if (l == 0) continue;
      // I = v0 W (m - h): adjoint on (m - h), then through the trace recursions.
      grad_x.assign(n_in, 0.0);
      for (std::size_t i = 0; i < n_out; ++i) {
        const double g = gv[i];
        if (g == 0.0) continue;
        const auto w = layer.weights.row(i);
        for (std::size_t j = 0; j < n_in; ++j) grad_x[j] += w[j] * g;
      }
      from_above.assign(n_in, 0.0);
      const double v0 = hp.v0(), alpha = hp.alpha(), beta = hp.beta();
      for (std::size_t j = 0; j < n_in; ++j) {
        const double gx = v0 * grad_x[j];
        const double gm = carry_m[l][j] + gx;
        const double gh = carry_h[l][j] - gx;
        from_above[j] = gm + gh;
        carry_m[l][j] = alpha * gm;
        carry_h[l][j] = beta * gh;
      }
    }
  }

  // dE/dW = sum_t v0 * dE/dV[t] (M[t] - H[t])^T
  Gradients grads = zero_gradients(layers);
  Vector diff;
  for (std::size_t l = 0; l < depth; ++l) {
    const std::size_t n_out = layers[l].outputs();
    const std::size_t n_in = layers[l].inputs();
    const double v0 = layers[l].hyper.v0();
    diff.resize(steps * n_in);
    for (std::size_t k = 0; k < steps * n_in; ++k) {
      diff[k] = history.m_trace[l][k] - history.h_trace[l][k];
    }
    for (std::size_t i = 0; i < n_out; ++i) {
      auto row = grads[l].row(i);
      for (std::size_t t = 0; t < steps; ++t) {
        const double g = v0 * grad_v[l][t * n_out + i];
        if (g == 0.0) continue;
        const double* x = diff.data() + t * n_in;
        for (std::size_t j = 0; j < n_in; ++j) row[j] += g * x[j];
      }
    }
  }
  return grads;
}

namespace {

double smoothed_loss(const Network& layers, const SpikeRaster& sample, std::size_t label,
                     const StepOptions& opts) {
  const auto res = forward(layers, sample, false, opts);
  return loss_and_probs(res.output_counts, label).loss;
}

}  // namespace

GradcheckResult gradcheck_smoothed(const Network& layers, const SpikeRaster& sample,
                                   std::size_t label, double perturbation,
                                   double temperature) {
  SPIKETS_REQUIRE(perturbation > 0.0, "gradcheck: perturbation must be > 0");
  SPIKETS_REQUIRE(temperature > 0.0, "gradcheck: temperature must be > 0");
  StepOptions opts{SpikeMode::kSmoothed, temperature};
  const auto res = forward(layers, sample, true, opts);
  const auto loss = loss_and_probs(res.output_counts, label);
  const auto analytic = backward(*res.history, loss, layers, opts);

  GradcheckResult out;
  out.denominator_floor = kGradcheckFloorUnits * std::numeric_limits<double>::epsilon() *
                          std::max(1.0, std::abs(loss.loss)) / (2.0 * perturbation);
  Network probe = layers;
  for (std::size_t l = 0; l < probe.size(); ++l) {
    auto w = probe[l].weights.data();
    const auto g = analytic[l].data();
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double saved = w[k];
      w[k] = saved + perturbation;
      const double up = smoothed_loss(probe, sample, label, opts);
      w[k] = saved - perturbation;
      const double down = smoothed_loss(probe, sample, label, opts);
      w[k] = saved;
      const double numeric = (up - down) / (2.0 * perturbation);
      const double scale = std::max(std::abs(g[k]), std::abs(numeric));
      if (scale < out.denominator_floor) ++out.entries_below_floor;
      const double denom = std::max(scale, out.denominator_floor);
      out.max_relative_error = std::max(out.max_relative_error, std::abs(g[k] - numeric) / denom);
      out.max_abs_gradient = std::max(out.max_abs_gradient, std::abs(g[k]));
      ++out.weights_checked;
    }
  }
  return out;
}

std::size_t predict_class(std::span<const double> output_counts) {
  SPIKETS_REQUIRE(!output_counts.empty(), "predict_class: empty output");
  return static_cast<std::size_t>(
      std::max_element(output_counts.begin(), output_counts.end()) - output_counts.begin());
}

EvalSummary evaluate(const Network& layers, std::span<const LabeledRaster> data,
                     const StepOptions& opts) {
  EvalSummary s;
  if (data.empty()) return s;
  std::size_t correct = 0;
  for (const auto& sample : data) {
    const auto res = forward(layers, sample.raster, false, opts);
    s.loss += loss_and_probs(res.output_counts, sample.label).loss;
    const auto pred = predict_class(res.output_counts);
    s.predictions.push_back(pred);
    if (pred == sample.label) ++correct;
  }
  s.loss /= static_cast<double>(data.size());
  s.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  return s;
}

namespace {

void clip_global_norm(Gradients& grads, double max_norm) {
  double sq = 0.0;
  for (const auto& g : grads) {
    for (double x : g.data()) sq += x * x;
  }
  const double norm = std::sqrt(sq);
  if (norm <= max_norm || norm == 0.0) return;
  const double scale = max_norm / norm;
  for (auto& g : grads) {
    for (double& x : g.data()) x *= scale;
  }
}

}  // namespace

TrainResult train(const Network& initial, std::span<const LabeledRaster> train_set,
                  std::span<const LabeledRaster> validation_set, const TrainerConfig& config,
                  const EpochCallback& on_epoch) {
  check_architecture(initial);
  SPIKETS_REQUIRE(!train_set.empty(), "train: empty training set");
  SPIKETS_REQUIRE(config.learning_rate > 0.0, "train: learning_rate must be > 0");
  SPIKETS_REQUIRE(config.batch_size > 0, "train: batch_size must be > 0");
  for (const auto& s : train_set) {
    SPIKETS_REQUIRE(s.raster.num_units() == initial.front().inputs(),
                    "train: sample has " + std::to_string(s.raster.num_units()) +
                        " input units, network expects " +
                        std::to_string(initial.front().inputs()));
    SPIKETS_REQUIRE(s.label < initial.back().outputs(),
                    "train: label " + std::to_string(s.label) + " >= output width");
  }

  const StepOptions opts{config.mode, config.temperature};
  TrainResult result;
  Network layers = initial;
  std::vector<AdamState> adam;
  for (const auto& l : layers) adam.emplace_back(l.weights, config.adam);
  result.best_layers = layers;

  Rng rng(config.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  double best_acc = -1.0, best_loss = 0.0;
  const auto t0 = std::chrono::steady_clock::now();

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      Gradients batch = zero_gradients(layers);
      for (std::size_t k = start; k < stop; ++k) {
        const auto& sample = train_set[order[k]];
        const auto res = forward(layers, sample.raster, true, opts);
        const auto loss = loss_and_probs(res.output_counts, sample.label);
        if (!std::isfinite(loss.loss)) {
          throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                             ", sample " + std::to_string(order[k]));
        }
        loss_sum += loss.loss;
        if (predict_class(res.output_counts) == sample.label) ++correct;
        const auto g = backward(*res.history, loss, layers, opts);
        for (std::size_t l = 0; l < layers.size(); ++l) {
          auto dst = batch[l].data();
          const auto src = g[l].data();
          for (std::size_t q = 0; q < dst.size(); ++q) dst[q] += src[q];
        }
      }
      if (config.grad_clip > 0.0) clip_global_norm(batch, config.grad_clip);
      for (std::size_t l = 0; l < layers.size(); ++l) {
        if (!batch[l].all_finite()) {
          throw NumericError("train: non-finite gradient in layer " + std::to_string(l) +
                             " at epoch " + std::to_string(epoch));
        }
        adam_step(layers[l].weights, batch[l], adam[l], config.learning_rate);
      }
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = loss_sum / static_cast<double>(train_set.size());
    m.train_acc = static_cast<double>(correct) / static_cast<double>(train_set.size());
    if (!validation_set.empty()) {
      const auto ev = evaluate(layers, validation_set, opts);
      m.val_loss = ev.loss;
      m.val_acc = ev.accuracy;
      if (ev.accuracy > best_acc || (ev.accuracy == best_acc && ev.loss < best_loss)) {
        best_acc = ev.accuracy;
        best_loss = ev.loss;
        result.best_layers = layers;
        result.best_epoch = epoch;
      }
    } else {
      result.best_layers = layers;
      result.best_epoch = epoch;
    }
    m.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.history.push_back(m);
    if (on_epoch) on_epoch(m);
  }
  result.final_layers = std::move(layers);
  return result;
}

}  // namespace spikets
