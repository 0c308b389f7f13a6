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

#include "spikets/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spikets/errors.hpp"

namespace spikets {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  SPIKETS_REQUIRE(data_.size() == rows * cols,
                  "Matrix: data length " + std::to_string(data_.size()) +
                      " != rows*cols " + std::to_string(rows * cols));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

Vector matvec(const Matrix& m, std::span<const double> v) {
  SPIKETS_REQUIRE(v.size() == m.cols(),
                  "matvec: vector length " + std::to_string(v.size()) +
                      " != matrix cols " + std::to_string(m.cols()));
  Vector out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) acc += r[j] * v[j];
    out[i] = acc;
  }
  return out;
}

Vector matvec_transposed(const Matrix& m, std::span<const double> v) {
  SPIKETS_REQUIRE(v.size() == m.rows(),
                  "matvec_transposed: vector length " + std::to_string(v.size()) +
                      " != matrix rows " + std::to_string(m.rows()));
  Vector out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out[j] += r[j] * vi;
  }
  return out;
}

Vector softmax(std::span<const double> v) {
  SPIKETS_REQUIRE(!v.empty(), "softmax: empty input");
  const double peak = *std::max_element(v.begin(), v.end());
  Vector out(v.size());
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - peak);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

AdamState::AdamState(std::size_t rows, std::size_t cols, AdamOptions opts)
    : first_moment(rows, cols), second_moment(rows, cols), options(opts) {}

void adam_step(Matrix& param, const Matrix& grad, AdamState& state, double lr) {
  SPIKETS_REQUIRE(param.same_shape(grad), "adam_step: param/grad shape mismatch");
  SPIKETS_REQUIRE(param.same_shape(state.first_moment) &&
                      param.same_shape(state.second_moment),
                  "adam_step: optimizer state shape mismatch");
  const auto& o = state.options;
  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  const double bias1 = 1.0 - std::pow(o.beta1, t);
  const double bias2 = 1.0 - std::pow(o.beta2, t);

  auto p = param.data();
  auto g = grad.data();
  auto m = state.first_moment.data();
  auto v = state.second_moment.data();
  for (std::size_t k = 0; k < p.size(); ++k) {
    m[k] = o.beta1 * m[k] + (1.0 - o.beta1) * g[k];
    v[k] = o.beta2 * v[k] + (1.0 - o.beta2) * g[k] * g[k];
    const double m_hat = m[k] / bias1;
    const double v_hat = v[k] / bias2;
    p[k] -= lr * m_hat / (std::sqrt(v_hat) + o.epsilon);
  }
  if (!param.all_finite()) {
    throw NumericError("adam_step: non-finite parameter after update (step " +
                       std::to_string(state.step_count) + ")");
  }
}

}  // namespace spikets
