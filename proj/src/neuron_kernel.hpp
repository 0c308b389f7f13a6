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

// Per-neuron arithmetic shared by the step-wise and event-driven engines.
// Both must evaluate exactly these expressions in exactly this order for
// their spike trains to agree bit for bit.

#pragma once

#include <cmath>

namespace spikets::detail {

inline double decay_reset_trace(double r, double o_prev, double gamma) {
  return gamma * (r + o_prev);
}

inline double membrane_potential(double a, double b, double r, double v0, double v_th) {
  return v0 * (a - b) - v_th * r;
}

inline bool fires(double v, double v_th) { return v >= v_th; }

inline double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace spikets::detail
