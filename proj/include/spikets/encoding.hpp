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
#include <optional>
#include <span>
#include <vector>

#include "spikets/raster.hpp"
#include "spikets/series.hpp"

namespace spikets {

// Current-based integrate-and-fire encoder neuron. The discrete update is
//   V <- exp(-dt/tau) * V + gain * I;  spike and V <- 0 when V > v_th.
struct CubaNeuronSpec {
  double tau = 10.0;
  double gain = 1.0;
  double v_th = 1.0;
  double dt = 1.0;

  void validate() const;
};

struct PopulationEncoder {
  std::vector<std::vector<CubaNeuronSpec>> channels;
  std::size_t upsample_factor = 1;

  std::size_t num_channels() const { return channels.size(); }
  std::size_t num_units() const;
  void validate() const;
};

struct PopulationOptions {
  std::size_t population_size = 5;
  double tau_min = 2.0;
  double tau_max = 50.0;
  std::vector<double> gain_magnitudes{1.0, 0.5, 0.25};
  double v_th = 1.0;
  double dt = 1.0;
  std::size_t upsample_factor = 1;
};

// Deterministic tuning grid: per channel, neuron k gets a log-spaced time
// constant in [tau_min, tau_max] and gain sign(+,-,+,-,...) *
// gain_magnitudes[(k/2) % size].
PopulationEncoder build_default_population(std::size_t num_channels,
                                           const PopulationOptions& opts = {});

// Encodes a channels x length series. Units are channel-major: channel c's
// population occupies units [offset_c, offset_c + |population_c|). Steps at
// or beyond `valid_length` (in samples) receive zero input current.
SpikeRaster cuba_encode(const Series& series, const PopulationEncoder& encoder,
                        std::optional<std::size_t> valid_length = std::nullopt);

// Rate coding of a [0,1]-scaled series. Spike train k = c*length + t carries
// round(value * max_spikes) evenly spaced spikes inside `window` steps.
SpikeRaster rate_encode(const Series& series, std::size_t window,
                        std::size_t max_spikes);

struct CodingStats {
  double total_spike_count = 0.0;  // mean over samples
  double mean_spike_rate = 0.0;    // spikes per unit per `window` steps
  std::size_t input_size = 0;
  std::size_t samples = 0;
};

// Averages over rasters; the rate for each raster is
//   count / num_units * window / num_steps.
CodingStats coding_stats(std::span<const SpikeRaster> rasters, std::size_t window);

}  // namespace spikets
