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
#include <span>
#include <vector>

namespace spikets {

struct SpikeEvent {
  std::uint32_t step;
  std::uint32_t unit;

  friend auto operator<=>(const SpikeEvent&, const SpikeEvent&) = default;
};

// Binary spike activity over discrete time. Holds both a dense
// [unit][step] grid and the event list sorted by (step, unit); every mutating
// call keeps the two in sync.
class SpikeRaster {
 public:
  SpikeRaster() = default;
  SpikeRaster(std::size_t num_units, std::size_t num_steps);

  static SpikeRaster from_events(std::size_t num_units, std::size_t num_steps,
                                 std::vector<SpikeEvent> events);

  std::size_t num_units() const { return num_units_; }
  std::size_t num_steps() const { return num_steps_; }
  std::size_t spike_count() const { return events_.size(); }

  bool at(std::size_t unit, std::size_t step) const {
    return dense_[unit * num_steps_ + step] != 0;
  }
  void set(std::size_t unit, std::size_t step);

  const std::vector<SpikeEvent>& events() const { return events_; }
  // Units that fire at `step`, ascending.
  std::vector<std::uint32_t> active_units(std::size_t step) const;
  // Per-step spike vector for step-wise simulation (0.0 / 1.0).
  void column(std::size_t step, std::span<double> out) const;
  std::vector<std::size_t> counts_per_unit() const;

  friend bool operator==(const SpikeRaster& a, const SpikeRaster& b) {
    return a.num_units_ == b.num_units_ && a.num_steps_ == b.num_steps_ &&
           a.events_ == b.events_;
  }

 private:
  std::size_t num_units_ = 0;
  std::size_t num_steps_ = 0;
  std::vector<std::uint8_t> dense_;
  std::vector<SpikeEvent> events_;
};

// Text raster format:
//   raster <num_units> <num_steps> <num_events> [label]
//   <step> <unit>          (one line per event, sorted)
void write_raster(std::ostream& os, const SpikeRaster& r, int label = -1);
// Returns false at clean end of stream; throws DataError on malformed input.
bool read_raster(std::istream& is, SpikeRaster& r, int& label);

}  // namespace spikets
