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

#include "spikets/encoding.hpp"

#include <cmath>
#include <string>

#include "spikets/errors.hpp"

namespace spikets {

void CubaNeuronSpec::validate() const {
  SPIKETS_REQUIRE(tau > 0.0 && std::isfinite(tau), "CubaNeuronSpec: tau must be > 0");
  SPIKETS_REQUIRE(v_th > 0.0 && std::isfinite(v_th), "CubaNeuronSpec: v_th must be > 0");
  SPIKETS_REQUIRE(dt > 0.0 && std::isfinite(dt), "CubaNeuronSpec: dt must be > 0");
  SPIKETS_REQUIRE(gain != 0.0 && std::isfinite(gain), "CubaNeuronSpec: gain must be nonzero");
}

std::size_t PopulationEncoder::num_units() const {
  std::size_t n = 0;
  for (const auto& c : channels) n += c.size();
  return n;
}

void PopulationEncoder::validate() const {
  SPIKETS_REQUIRE(upsample_factor >= 1, "PopulationEncoder: upsample_factor must be >= 1");
  for (const auto& c : channels) {
    SPIKETS_REQUIRE(!c.empty(), "PopulationEncoder: empty channel population");
    for (const auto& n : c) n.validate();
  }
}

PopulationEncoder build_default_population(std::size_t num_channels,
                                           const PopulationOptions& opts) {
  const std::size_t e = opts.population_size;
  SPIKETS_REQUIRE(e >= 2, "build_default_population: population size must be >= 2 "
                          "so both input signs are covered");
  SPIKETS_REQUIRE(opts.tau_min > 0.0 && opts.tau_min < opts.tau_max,
                  "build_default_population: need 0 < tau_min < tau_max");
  SPIKETS_REQUIRE(!opts.gain_magnitudes.empty(),
                  "build_default_population: gain_magnitudes is empty");

  std::vector<CubaNeuronSpec> population(e);
  const double log_ratio = std::log(opts.tau_max / opts.tau_min);
  for (std::size_t k = 0; k < e; ++k) {
    auto& n = population[k];
    n.tau = opts.tau_min * std::exp(log_ratio * static_cast<double>(k) /
                                    static_cast<double>(e - 1));
    const double magnitude = opts.gain_magnitudes[(k / 2) % opts.gain_magnitudes.size()];
    n.gain = (k % 2 == 0) ? magnitude : -magnitude;
    n.v_th = opts.v_th;
    n.dt = opts.dt;
  }

  PopulationEncoder enc;
  enc.channels.assign(num_channels, population);
  enc.upsample_factor = opts.upsample_factor;
  enc.validate();
  return enc;
}

SpikeRaster cuba_encode(const Series& series, const PopulationEncoder& encoder,
                        std::optional<std::size_t> valid_length) {
  SPIKETS_REQUIRE(series.size() == encoder.num_channels(),
                  "cuba_encode: series has " + std::to_string(series.size()) +
                      " channels, encoder expects " +
                      std::to_string(encoder.num_channels()));
  const std::size_t length = series.empty() ? 0 : series.front().size();
  for (const auto& ch : series) {
    SPIKETS_REQUIRE(ch.size() == length, "cuba_encode: ragged channels");
    for (double x : ch) {
      SPIKETS_REQUIRE(std::isfinite(x), "cuba_encode: non-finite input value");
    }
  }
  const std::size_t up = encoder.upsample_factor;
  const std::size_t valid = std::min(valid_length.value_or(length), length);
  const std::size_t steps = length * up;

  std::vector<SpikeEvent> events;
  std::uint32_t unit = 0;
  for (std::size_t c = 0; c < series.size(); ++c) {
    for (const auto& neuron : encoder.channels[c]) {
      const double decay = std::exp(-neuron.dt / neuron.tau);
      double v = 0.0;
      for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t sample = s / up;
        const double current = sample < valid ? series[c][sample] : 0.0;
        v = decay * v + neuron.gain * current;
        if (v > neuron.v_th) {
          events.push_back({static_cast<std::uint32_t>(s), unit});
          v = 0.0;
        }
      }
      ++unit;
    }
  }
  return SpikeRaster::from_events(encoder.num_units(), steps, std::move(events));
}

SpikeRaster rate_encode(const Series& series, std::size_t window, std::size_t max_spikes) {
  SPIKETS_REQUIRE(window > 0, "rate_encode: window must be > 0");
  SPIKETS_REQUIRE(max_spikes <= window,
                  "rate_encode: max_spikes must not exceed the window length");
  const std::size_t length = series.empty() ? 0 : series.front().size();
  std::vector<SpikeEvent> events;
  std::uint32_t unit = 0;
  for (const auto& ch : series) {
    SPIKETS_REQUIRE(ch.size() == length, "rate_encode: ragged channels");
    for (double x : ch) {
      SPIKETS_REQUIRE(std::isfinite(x), "rate_encode: non-finite input value");
      if (x < 0.0) {
        throw ContractError(
            "rate_encode: negative value " + std::to_string(x) +
            "; rate coding represents values by spike counts and cannot encode "
            "negative inputs (scale to [0,1] first)");
      }
      SPIKETS_REQUIRE(x <= 1.0, "rate_encode: value above 1; scale inputs to [0,1]");
      const auto n = static_cast<std::size_t>(std::llround(x * static_cast<double>(max_spikes)));
      for (std::size_t i = 0; i < n; ++i) {
        const auto step = static_cast<std::uint32_t>(
            (2 * i + 1) * window / (2 * n));
        events.push_back({step, unit});
      }
      ++unit;
    }
  }
  return SpikeRaster::from_events(series.size() * length, window, std::move(events));
}

CodingStats coding_stats(std::span<const SpikeRaster> rasters, std::size_t window) {
  SPIKETS_REQUIRE(!rasters.empty(), "coding_stats: no rasters");
  SPIKETS_REQUIRE(window > 0, "coding_stats: window must be > 0");
  CodingStats s;
  s.input_size = rasters.front().num_units();
  s.samples = rasters.size();
  double count_sum = 0.0;
  double rate_sum = 0.0;
  for (const auto& r : rasters) {
    SPIKETS_REQUIRE(r.num_units() == s.input_size, "coding_stats: rasters differ in num_units");
    const double count = static_cast<double>(r.spike_count());
    count_sum += count;
    if (r.num_units() > 0 && r.num_steps() > 0) {
      rate_sum += count / static_cast<double>(r.num_units()) *
                  static_cast<double>(window) / static_cast<double>(r.num_steps());
    }
  }
  s.total_spike_count = count_sum / static_cast<double>(rasters.size());
  s.mean_spike_rate = rate_sum / static_cast<double>(rasters.size());
  return s;
}

}  // namespace spikets
