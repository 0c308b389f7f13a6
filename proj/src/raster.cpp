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

#include "spikets/raster.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "spikets/errors.hpp"

namespace spikets {

SpikeRaster::SpikeRaster(std::size_t num_units, std::size_t num_steps)
    : num_units_(num_units), num_steps_(num_steps), dense_(num_units * num_steps, 0) {}

SpikeRaster SpikeRaster::from_events(std::size_t num_units, std::size_t num_steps,
                                     std::vector<SpikeEvent> events) {
  SpikeRaster r(num_units, num_steps);
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  for (const auto& e : events) {
    SPIKETS_REQUIRE(e.step < num_steps && e.unit < num_units,
                    "SpikeRaster: event (" + std::to_string(e.step) + ", " +
                        std::to_string(e.unit) + ") outside " +
                        std::to_string(num_units) + "x" + std::to_string(num_steps));
    r.dense_[e.unit * num_steps + e.step] = 1;
  }
  r.events_ = std::move(events);
  return r;
}

void SpikeRaster::set(std::size_t unit, std::size_t step) {
  SPIKETS_REQUIRE(unit < num_units_ && step < num_steps_, "SpikeRaster::set out of range");
  auto& cell = dense_[unit * num_steps_ + step];
  if (cell) return;
  cell = 1;
  SpikeEvent e{static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(unit)};
  events_.insert(std::lower_bound(events_.begin(), events_.end(), e), e);
}

std::vector<std::uint32_t> SpikeRaster::active_units(std::size_t step) const {
  std::vector<std::uint32_t> out;
  auto lo = std::lower_bound(events_.begin(), events_.end(),
                             SpikeEvent{static_cast<std::uint32_t>(step), 0});
  for (; lo != events_.end() && lo->step == step; ++lo) out.push_back(lo->unit);
  return out;
}

void SpikeRaster::column(std::size_t step, std::span<double> out) const {
  SPIKETS_REQUIRE(out.size() == num_units_, "SpikeRaster::column size mismatch");
  for (std::size_t u = 0; u < num_units_; ++u) {
    out[u] = dense_[u * num_steps_ + step] ? 1.0 : 0.0;
  }
}

std::vector<std::size_t> SpikeRaster::counts_per_unit() const {
  std::vector<std::size_t> c(num_units_, 0);
  for (const auto& e : events_) ++c[e.unit];
  return c;
}

void write_raster(std::ostream& os, const SpikeRaster& r, int label) {
  os << "raster " << r.num_units() << ' ' << r.num_steps() << ' ' << r.spike_count();
  if (label >= 0) os << ' ' << label;
  os << '\n';
  for (const auto& e : r.events()) os << e.step << ' ' << e.unit << '\n';
}

bool read_raster(std::istream& is, SpikeRaster& r, int& label) {
  std::string line;
  while (std::getline(is, line) && line.empty()) {
  }
  if (!is && line.empty()) return false;
  std::istringstream header(line);
  std::string tag;
  std::size_t units = 0, steps = 0, count = 0;
  if (!(header >> tag >> units >> steps >> count) || tag != "raster") {
    throw DataError("raster file: malformed header '" + line + "'");
  }
  label = -1;
  header >> label;
  std::vector<SpikeEvent> events;
  events.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::uint32_t step = 0, unit = 0;
    if (!(is >> step >> unit)) {
      throw DataError("raster file: expected " + std::to_string(count) +
                      " events, got " + std::to_string(k));
    }
    events.push_back({step, unit});
  }
  is.ignore(1);
  if (!std::is_sorted(events.begin(), events.end())) {
    throw DataError("raster file: events not sorted by (step, unit)");
  }
  try {
    r = SpikeRaster::from_events(units, steps, std::move(events));
  } catch (const ContractError& e) {
    throw DataError(std::string("raster file: ") + e.what());
  }
  return true;
}

}  // namespace spikets
