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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spikets/series.hpp"

namespace spikets {

struct TimeSeriesDataset {
  std::string name;
  std::vector<Series> samples;
  std::vector<std::size_t> labels;
  std::vector<std::string> class_names;
  std::size_t num_channels = 0;
  std::size_t series_length = 0;  // max length; equal for all after padding
  std::vector<std::size_t> original_lengths;
  std::size_t missing_values_imputed = 0;

  std::size_t size() const { return samples.size(); }
  std::size_t num_classes() const { return class_names.size(); }
  bool equal_length() const;
  // Throws DataError when an invariant is broken.
  void validate() const;
};

enum class MissingPolicy { kInterpolate, kFail };

struct ParseOptions {
  MissingPolicy missing = MissingPolicy::kInterpolate;
  // Fix the label -> index mapping (e.g. reuse the train split's classes for
  // the test split). Labels outside this list are errors.
  std::optional<std::vector<std::string>> class_names;
};

// sktime/UEA `.ts` text. Class indices follow the @classLabel declaration
// order (falling back to first appearance in the data). Errors carry line
// numbers.
TimeSeriesDataset parse_ts(std::string_view content, const ParseOptions& opts = {});
TimeSeriesDataset load_ts_file(const std::string& path, const ParseOptions& opts = {});
// Writes values with 17 significant digits so parse_ts recovers them exactly.
std::string serialize_ts(const TimeSeriesDataset& ds);

struct CsvLayout {
  std::size_t num_channels = 1;
  enum class LabelColumn { kFirst, kLast } label_column = LabelColumn::kLast;
  bool has_header = false;
  char delimiter = ',';
};

// Wide CSV: one row per case, values channel-major (c0t0..c0tL-1, c1t0, ...),
// plus a label column.
TimeSeriesDataset parse_csv(std::string_view content, const CsvLayout& layout,
                            const ParseOptions& opts = {});

struct ChannelStats {
  std::vector<double> mean;
  std::vector<double> stddev;
};

// Statistics over the valid (unpadded) region of every sample.
ChannelStats channel_stats(const TimeSeriesDataset& ds);
// (x - mean) / max(std, 1e-8), in place, within original lengths.
void apply_znorm(TimeSeriesDataset& ds, const ChannelStats& stats);
// Normalizes `train` with its own statistics and `test` with the same ones.
ChannelStats znormalize(TimeSeriesDataset& train, TimeSeriesDataset* test = nullptr);

enum class PadPolicy { kZeroPadEnd, kRepeatLast };

// Pads every channel of every sample to `target_length` (default: the
// longest sample). original_lengths keeps the true lengths.
void pad_to_equal_length(TimeSeriesDataset& ds, PadPolicy policy,
                         std::optional<std::size_t> target_length = std::nullopt);

// Per-channel min/max over the valid region, for [0,1] scaling before rate
// coding. Values outside the fitted range are clamped.
struct MinMax {
  std::vector<double> lo;
  std::vector<double> hi;
};
MinMax channel_minmax(const TimeSeriesDataset& ds);
Series minmax_scale(const Series& s, const MinMax& mm);

struct DatasetManifest {
  std::string name;
  std::string archive_url;    // zip with <name>_TRAIN.ts and <name>_TEST.ts
  std::string train_member;
  std::string test_member;
  std::size_t expected_train_size = 0;
  std::size_t expected_test_size = 0;
  std::size_t num_classes = 0;
  std::size_t num_channels = 0;
  std::size_t series_length = 0;  // max length
  bool equal_length = true;
  std::string archive_sha256;  // empty: trust on first download, then pin
};

const std::vector<DatasetManifest>& builtin_manifests();
std::optional<DatasetManifest> find_manifest(std::string_view name);

// Throws DataError naming expected vs actual on any mismatch.
void check_against_manifest(const DatasetManifest& m, const TimeSeriesDataset& train,
                            const TimeSeriesDataset& test);

struct DatasetSplits {
  TimeSeriesDataset train;
  TimeSeriesDataset test;
  bool synthetic = false;
};

// Loads <dir>/<name>_TRAIN.ts and <dir>/<name>_TEST.ts; the test split uses
// the train split's class mapping.
DatasetSplits load_splits(const std::string& dir, const std::string& name,
                          const ParseOptions& opts = {});

// Class-structured random series with a manifest's exact shape (sample
// counts, channels, length, classes). Stand-in when an archive cannot be
// obtained; flagged as synthetic everywhere it is reported.
DatasetSplits make_synthetic(const DatasetManifest& m, std::uint64_t seed);

}  // namespace spikets
