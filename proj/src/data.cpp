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

#include "spikets/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "spikets/errors.hpp"
#include "spikets/rng.hpp"

namespace spikets {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw DataError("line " + std::to_string(line) + ": " + msg);
}

// Parses a numeric cell; '?' and NaN spellings are missing values.
bool parse_value(std::string_view tok, double& out) {
  tok = trim(tok);
  if (tok == "?" || tok == "NaN" || tok == "nan" || tok == "NAN") {
    out = kMissing;
    return true;
  }
  if (tok.empty()) return false;
  std::string buf(tok);
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size() && std::isfinite(out);
}

bool parse_bool(std::string_view tok, bool& out) {
  const auto t = lower(tok);
  if (t == "true") {
    out = true;
    return true;
  }
  if (t == "false") {
    out = false;
    return true;
  }
  return false;
}

bool parse_count(std::string_view tok, std::size_t& out) {
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::size_t class_index(std::vector<std::string>& classes, std::string_view label,
                        bool fixed, std::size_t line) {
  auto it = std::find(classes.begin(), classes.end(), label);
  if (it != classes.end()) return static_cast<std::size_t>(it - classes.begin());
  if (fixed) fail(line, "unknown class label '" + std::string(label) + "'");
  classes.emplace_back(label);
  return classes.size() - 1;
}

// Linear interpolation across missing runs, edge values carried outward.
std::size_t impute_channel(std::vector<double>& x) {
  std::size_t missing = 0;
  std::optional<std::size_t> prev;
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (!std::isnan(x[t])) {
      if (prev && t - *prev > 1) {
        const double a = x[*prev], b = x[t];
        const double span = static_cast<double>(t - *prev);
        for (std::size_t k = *prev + 1; k < t; ++k) {
          x[k] = a + (b - a) * static_cast<double>(k - *prev) / span;
        }
      } else if (!prev) {
        for (std::size_t k = 0; k < t; ++k) x[k] = x[t];
      }
      prev = t;
    } else {
      ++missing;
    }
  }
  if (!prev) {
    std::fill(x.begin(), x.end(), 0.0);
  } else {
    for (std::size_t k = *prev + 1; k < x.size(); ++k) x[k] = x[*prev];
  }
  return missing;
}

void finish_dataset(TimeSeriesDataset& ds, const ParseOptions& opts,
                    const std::vector<std::size_t>& sample_lines) {
  for (std::size_t s = 0; s < ds.samples.size(); ++s) {
    for (auto& ch : ds.samples[s]) {
      const bool has_missing = std::any_of(ch.begin(), ch.end(),
                                           [](double v) { return std::isnan(v); });
      if (!has_missing) continue;
      if (opts.missing == MissingPolicy::kFail) {
        fail(sample_lines[s], "missing value and missing-value policy is 'fail'");
      }
      ds.missing_values_imputed += impute_channel(ch);
    }
  }
  ds.series_length = 0;
  ds.original_lengths.clear();
  for (const auto& s : ds.samples) {
    const std::size_t len = s.empty() ? 0 : s.front().size();
    ds.original_lengths.push_back(len);
    ds.series_length = std::max(ds.series_length, len);
  }
  ds.validate();
}

}  // namespace

bool TimeSeriesDataset::equal_length() const {
  for (const auto& s : samples) {
    for (const auto& ch : s) {
      if (ch.size() != series_length) return false;
    }
  }
  return true;
}

void TimeSeriesDataset::validate() const {
  if (samples.size() != labels.size()) throw DataError(name + ": samples/labels size mismatch");
  if (class_names.size() < 2) {
    throw DataError(name + ": need at least 2 classes, found " +
                    std::to_string(class_names.size()));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != num_channels) {
      throw DataError(name + ": sample " + std::to_string(i) + " has " +
                      std::to_string(samples[i].size()) + " channels, expected " +
                      std::to_string(num_channels));
    }
    if (labels[i] >= class_names.size()) {
      throw DataError(name + ": label index out of range in sample " + std::to_string(i));
    }
  }
}

TimeSeriesDataset parse_ts(std::string_view content, const ParseOptions& opts) {
  TimeSeriesDataset ds;
  bool in_data = false;
  bool have_class_header = false;
  std::optional<std::size_t> dimensions;
  std::optional<bool> univariate;
  std::optional<bool> equal_length;
  std::optional<std::size_t> series_length;
  std::vector<std::string> classes;
  bool fixed_classes = false;
  if (opts.class_names) {
    classes = *opts.class_names;
    fixed_classes = true;
  }
  std::vector<std::size_t> sample_lines;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const std::size_t nl = content.find('\n', pos);
    std::string_view raw = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                                           : nl - pos);
    pos = (nl == std::string_view::npos) ? content.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '@') {
      if (in_data) fail(line_no, "header line after @data");
      const auto tokens = split_ws(line);
      const std::string key = lower(tokens[0]);
      auto need_arg = [&](std::size_t n) {
        if (tokens.size() < n + 1) fail(line_no, "malformed header '" + std::string(line) + "'");
      };
      if (key == "@problemname") {
        need_arg(1);
        ds.name = std::string(trim(line.substr(tokens[0].size())));
      } else if (key == "@timestamps") {
        need_arg(1);
        bool v = false;
        if (!parse_bool(tokens[1], v)) fail(line_no, "malformed @timeStamps value");
        if (v) fail(line_no, "time-stamped series are not supported");
      } else if (key == "@missing") {
        need_arg(1);
        bool v = false;
        if (!parse_bool(tokens[1], v)) fail(line_no, "malformed @missing value");
      } else if (key == "@univariate") {
        need_arg(1);
        bool v = false;
        if (!parse_bool(tokens[1], v)) fail(line_no, "malformed @univariate value");
        univariate = v;
      } else if (key == "@dimensions" || key == "@dimension") {
        need_arg(1);
        std::size_t d = 0;
        if (!parse_count(tokens[1], d) || d == 0) fail(line_no, "malformed @dimensions value");
        dimensions = d;
      } else if (key == "@equallength") {
        need_arg(1);
        bool v = false;
        if (!parse_bool(tokens[1], v)) fail(line_no, "malformed @equalLength value");
        equal_length = v;
      } else if (key == "@serieslength") {
        need_arg(1);
        std::size_t n = 0;
        if (!parse_count(tokens[1], n) || n == 0) fail(line_no, "malformed @seriesLength value");
        series_length = n;
      } else if (key == "@classlabel") {
        need_arg(1);
        bool v = false;
        if (!parse_bool(tokens[1], v)) fail(line_no, "malformed @classLabel value");
        if (!v) fail(line_no, "@classLabel false: unlabeled data is not supported");
        have_class_header = true;
        if (!fixed_classes) {
          for (std::size_t k = 2; k < tokens.size(); ++k) {
            const std::string label(tokens[k]);
            if (std::find(classes.begin(), classes.end(), label) != classes.end()) {
              fail(line_no, "duplicate class label '" + label + "'");
            }
            classes.push_back(label);
          }
          fixed_classes = !classes.empty();
        }
      } else if (key == "@targetlabel") {
        fail(line_no, "regression targets (@targetLabel) are not supported");
      } else if (key == "@data") {
        if (!have_class_header) fail(line_no, "@data before @classLabel");
        in_data = true;
      }
      continue;
    }

    if (!in_data) fail(line_no, "data line before @data");
    const auto parts = split(line, ':');
    if (parts.size() < 2) fail(line_no, "expected channels followed by ':<label>'");
    const std::string_view label = trim(parts.back());
    if (label.empty()) fail(line_no, "empty class label");

    Series sample;
    sample.reserve(parts.size() - 1);
    for (std::size_t c = 0; c + 1 < parts.size(); ++c) {
      const auto cells = split(parts[c], ',');
      std::vector<double> values;
      values.reserve(cells.size());
      for (const auto& cell : cells) {
        double v = 0.0;
        if (!parse_value(cell, v)) {
          fail(line_no, "non-numeric value '" + std::string(trim(cell)) + "' in channel " +
                            std::to_string(c));
        }
        values.push_back(v);
      }
      if (!sample.empty() && values.size() != sample.front().size()) {
        fail(line_no, "channels of one case differ in length");
      }
      sample.push_back(std::move(values));
    }
    if (ds.samples.empty()) {
      ds.num_channels = sample.size();
    } else if (sample.size() != ds.num_channels) {
      fail(line_no, "case has " + std::to_string(sample.size()) + " channels, previous cases have " +
                        std::to_string(ds.num_channels));
    }
    if (dimensions && sample.size() != *dimensions) {
      fail(line_no, "case has " + std::to_string(sample.size()) + " channels, @dimensions says " +
                        std::to_string(*dimensions));
    }
    if (univariate && *univariate && sample.size() != 1) {
      fail(line_no, "@univariate true but case has " + std::to_string(sample.size()) + " channels");
    }
    const std::size_t len = sample.front().size();
    if (equal_length && *equal_length) {
      if (series_length && len != *series_length) {
        fail(line_no, "series length " + std::to_string(len) + " != @seriesLength " +
                          std::to_string(*series_length));
      }
      if (!ds.samples.empty() && len != ds.samples.front().front().size()) {
        fail(line_no, "@equalLength true but series lengths differ");
      }
    }
    ds.labels.push_back(class_index(classes, label, fixed_classes, line_no));
    ds.samples.push_back(std::move(sample));
    sample_lines.push_back(line_no);
  }

  if (!in_data) throw DataError("no @data section");
  if (ds.samples.empty()) throw DataError("empty @data section");
  ds.class_names = std::move(classes);
  finish_dataset(ds, opts, sample_lines);
  return ds;
}

TimeSeriesDataset load_ts_file(const std::string& path, const ParseOptions& opts) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  try {
    return parse_ts(buf.str(), opts);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string serialize_ts(const TimeSeriesDataset& ds) {
  std::ostringstream os;
  const bool equal = ds.equal_length();
  os << "@problemName " << (ds.name.empty() ? "unnamed" : ds.name) << '\n';
  os << "@timeStamps false\n@missing false\n";
  os << "@univariate " << (ds.num_channels == 1 ? "true" : "false") << '\n';
  os << "@dimensions " << ds.num_channels << '\n';
  os << "@equalLength " << (equal ? "true" : "false") << '\n';
  if (equal) os << "@seriesLength " << ds.series_length << '\n';
  os << "@classLabel true";
  for (const auto& c : ds.class_names) os << ' ' << c;
  os << "\n@data\n";
  char buf[32];
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    for (const auto& ch : ds.samples[i]) {
      for (std::size_t t = 0; t < ch.size(); ++t) {
        std::snprintf(buf, sizeof(buf), "%.17g", ch[t]);
        if (t) os << ',';
        os << buf;
      }
      os << ':';
    }
    os << ds.class_names[ds.labels[i]] << '\n';
  }
  return os.str();
}

TimeSeriesDataset parse_csv(std::string_view content, const CsvLayout& layout,
                            const ParseOptions& opts) {
  SPIKETS_REQUIRE(layout.num_channels > 0, "parse_csv: num_channels must be > 0");
  if (trim(content).empty()) throw DataError("csv: empty file");
  TimeSeriesDataset ds;
  ds.num_channels = layout.num_channels;
  std::vector<std::string> classes;
  bool fixed = false;
  if (opts.class_names) {
    classes = *opts.class_names;
    fixed = true;
  }
  std::vector<std::size_t> sample_lines;
  std::optional<std::size_t> row_width;
  std::size_t line_no = 0;
  bool header_skipped = !layout.has_header;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const std::size_t nl = content.find('\n', pos);
    std::string_view raw = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                                           : nl - pos);
    pos = (nl == std::string_view::npos) ? content.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (!header_skipped) {
      header_skipped = true;
      continue;
    }
    auto cells = split(line, layout.delimiter);
    if (row_width && cells.size() != *row_width) {
      fail(line_no, "ragged row: " + std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(*row_width));
    }
    row_width = cells.size();
    if (cells.size() < 2) fail(line_no, "row needs a label and at least one value");
    std::string_view label;
    if (layout.label_column == CsvLayout::LabelColumn::kFirst) {
      label = trim(cells.front());
      cells.erase(cells.begin());
    } else {
      label = trim(cells.back());
      cells.pop_back();
    }
    if (label.empty()) fail(line_no, "empty label cell");
    if (cells.size() % layout.num_channels != 0) {
      fail(line_no, std::to_string(cells.size()) + " values do not split into " +
                        std::to_string(layout.num_channels) + " channels");
    }
    const std::size_t len = cells.size() / layout.num_channels;
    Series sample(layout.num_channels, std::vector<double>(len));
    for (std::size_t k = 0; k < cells.size(); ++k) {
      double v = 0.0;
      if (!parse_value(cells[k], v)) {
        fail(line_no, "non-numeric cell '" + std::string(trim(cells[k])) + "'");
      }
      sample[k / len][k % len] = v;
    }
    ds.labels.push_back(class_index(classes, label, fixed, line_no));
    ds.samples.push_back(std::move(sample));
    sample_lines.push_back(line_no);
  }
  if (ds.samples.empty()) throw DataError("csv: no data rows (header only?)");
  ds.class_names = std::move(classes);
  finish_dataset(ds, opts, sample_lines);
  return ds;
}

ChannelStats channel_stats(const TimeSeriesDataset& ds) {
  ChannelStats st;
  st.mean.assign(ds.num_channels, 0.0);
  st.stddev.assign(ds.num_channels, 0.0);
  for (std::size_t c = 0; c < ds.num_channels; ++c) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
      const std::size_t len = ds.original_lengths[i];
      for (std::size_t t = 0; t < len; ++t) sum += ds.samples[i][c][t];
      n += len;
    }
    const double mean = n ? sum / static_cast<double>(n) : 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
      const std::size_t len = ds.original_lengths[i];
      for (std::size_t t = 0; t < len; ++t) {
        const double d = ds.samples[i][c][t] - mean;
        sq += d * d;
      }
    }
    st.mean[c] = mean;
    st.stddev[c] = n ? std::sqrt(sq / static_cast<double>(n)) : 0.0;
  }
  return st;
}

void apply_znorm(TimeSeriesDataset& ds, const ChannelStats& stats) {
  SPIKETS_REQUIRE(stats.mean.size() == ds.num_channels, "apply_znorm: channel count mismatch");
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const std::size_t len = ds.original_lengths[i];
    for (std::size_t c = 0; c < ds.num_channels; ++c) {
      const double sd = std::max(stats.stddev[c], 1e-8);
      auto& ch = ds.samples[i][c];
      for (std::size_t t = 0; t < len; ++t) ch[t] = (ch[t] - stats.mean[c]) / sd;
    }
  }
}

ChannelStats znormalize(TimeSeriesDataset& train, TimeSeriesDataset* test) {
  const auto stats = channel_stats(train);
  apply_znorm(train, stats);
  if (test) apply_znorm(*test, stats);
  return stats;
}

void pad_to_equal_length(TimeSeriesDataset& ds, PadPolicy policy,
                         std::optional<std::size_t> target_length) {
  std::size_t target = target_length.value_or(0);
  for (const auto& s : ds.samples) {
    for (const auto& ch : s) target = std::max(target, target_length ? target : ch.size());
  }
  for (auto& s : ds.samples) {
    for (auto& ch : s) {
      SPIKETS_REQUIRE(ch.size() <= target, "pad_to_equal_length: series longer than target");
      const double fill = (policy == PadPolicy::kRepeatLast && !ch.empty()) ? ch.back() : 0.0;
      ch.resize(target, fill);
    }
  }
  ds.series_length = target;
}

MinMax channel_minmax(const TimeSeriesDataset& ds) {
  MinMax mm;
  mm.lo.assign(ds.num_channels, std::numeric_limits<double>::infinity());
  mm.hi.assign(ds.num_channels, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    for (std::size_t c = 0; c < ds.num_channels; ++c) {
      for (std::size_t t = 0; t < ds.original_lengths[i]; ++t) {
        mm.lo[c] = std::min(mm.lo[c], ds.samples[i][c][t]);
        mm.hi[c] = std::max(mm.hi[c], ds.samples[i][c][t]);
      }
    }
  }
  return mm;
}

Series minmax_scale(const Series& s, const MinMax& mm) {
  SPIKETS_REQUIRE(s.size() == mm.lo.size(), "minmax_scale: channel count mismatch");
  Series out = s;
  for (std::size_t c = 0; c < s.size(); ++c) {
    const double range = mm.hi[c] - mm.lo[c];
    for (double& x : out[c]) {
      x = range > 0.0 ? std::clamp((x - mm.lo[c]) / range, 0.0, 1.0) : 0.0;
    }
  }
  return out;
}

const std::vector<DatasetManifest>& builtin_manifests() {
  static const std::vector<DatasetManifest> manifests = [] {
    auto make = [](std::string name, std::size_t train, std::size_t test, std::size_t classes,
                   std::size_t channels, std::size_t length, bool equal) {
      DatasetManifest m;
      m.archive_url = "https://www.timeseriesclassification.com/aeon-toolkit/" + name + ".zip";
      m.train_member = name + "_TRAIN.ts";
      m.test_member = name + "_TEST.ts";
      m.name = std::move(name);
      m.expected_train_size = train;
      m.expected_test_size = test;
      m.num_classes = classes;
      m.num_channels = channels;
      m.series_length = length;
      m.equal_length = equal;
      return m;
    };
    return std::vector<DatasetManifest>{
        make("ArticularyWordRecognition", 275, 300, 25, 9, 144, true),
        make("AtrialFibrillation", 15, 15, 3, 2, 640, true),
        make("BasicMotions", 40, 40, 4, 6, 100, true),
        make("FaceDetection", 5890, 3524, 2, 144, 62, true),
        make("FingerMovements", 316, 100, 2, 28, 50, true),
        make("Heartbeat", 204, 205, 2, 61, 405, true),
        make("JapaneseVowels", 270, 370, 9, 12, 29, false),
        make("RacketSports", 151, 152, 4, 6, 30, true),
        make("SpokenArabicDigits", 6599, 2199, 10, 13, 93, false),
    };
  }();
  return manifests;
}

std::optional<DatasetManifest> find_manifest(std::string_view name) {
  const auto key = lower(name);
  for (const auto& m : builtin_manifests()) {
    if (lower(m.name) == key) return m;
  }
  return std::nullopt;
}

void check_against_manifest(const DatasetManifest& m, const TimeSeriesDataset& train,
                            const TimeSeriesDataset& test) {
  auto expect = [&](const char* what, std::size_t expected, std::size_t actual) {
    if (expected != actual) {
      throw DataError(m.name + ": " + what + " mismatch: expected " + std::to_string(expected) +
                      ", got " + std::to_string(actual));
    }
  };
  expect("train size", m.expected_train_size, train.size());
  expect("test size", m.expected_test_size, test.size());
  expect("class count", m.num_classes, train.num_classes());
  expect("channel count", m.num_channels, train.num_channels);
  expect("test channel count", m.num_channels, test.num_channels);
  if (m.equal_length) {
    expect("series length", m.series_length, train.series_length);
    expect("test series length", m.series_length, test.series_length);
  }
}

DatasetSplits load_splits(const std::string& dir, const std::string& name,
                          const ParseOptions& opts) {
  DatasetSplits s;
  s.train = load_ts_file(dir + "/" + name + "_TRAIN.ts", opts);
  ParseOptions test_opts = opts;
  test_opts.class_names = s.train.class_names;
  s.test = load_ts_file(dir + "/" + name + "_TEST.ts", test_opts);
  if (s.test.num_channels != s.train.num_channels) {
    throw DataError(name + ": train/test channel counts differ");
  }
  if (s.train.name.empty()) s.train.name = name;
  if (s.test.name.empty()) s.test.name = name;
  return s;
}

namespace {

double gaussian(Rng& rng) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

TimeSeriesDataset synth_split(const DatasetManifest& m, std::size_t count,
                              const std::vector<std::vector<std::array<double, 4>>>& protos,
                              Rng& rng) {
  TimeSeriesDataset ds;
  ds.name = m.name;
  ds.num_channels = m.num_channels;
  for (std::size_t k = 0; k < m.num_classes; ++k) ds.class_names.push_back(std::to_string(k + 1));
  const double len = static_cast<double>(m.series_length);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t label = i % m.num_classes;
    Series s(m.num_channels, std::vector<double>(m.series_length));
    const double jitter = 0.3 * gaussian(rng);
    for (std::size_t c = 0; c < m.num_channels; ++c) {
      const auto& p = protos[label][c];  // amplitude, cycles, phase, offset
      for (std::size_t t = 0; t < m.series_length; ++t) {
        const double x = static_cast<double>(t) / len;
        s[c][t] = p[0] * std::sin(2.0 * std::numbers::pi * p[1] * x + p[2] + jitter) + p[3] +
                  0.3 * gaussian(rng);
      }
    }
    ds.samples.push_back(std::move(s));
    ds.labels.push_back(label);
  }
  ds.series_length = m.series_length;
  ds.original_lengths.assign(count, m.series_length);
  ds.validate();
  return ds;
}

}  // namespace

DatasetSplits make_synthetic(const DatasetManifest& m, std::uint64_t seed) {
  SPIKETS_REQUIRE(m.num_classes >= 2 && m.num_channels > 0 && m.series_length > 0,
                  "make_synthetic: manifest shape incomplete");
  Rng rng(seed);
  std::vector<std::vector<std::array<double, 4>>> protos(m.num_classes);
  for (auto& cls : protos) {
    for (std::size_t c = 0; c < m.num_channels; ++c) {
      cls.push_back({rng.uniform(0.5, 2.0), rng.uniform(1.0, 6.0),
                     rng.uniform(0.0, 2.0 * std::numbers::pi), rng.uniform(-1.0, 1.0)});
    }
  }
  DatasetSplits s;
  s.train = synth_split(m, m.expected_train_size, protos, rng);
  s.test = synth_split(m, m.expected_test_size, protos, rng);
  s.synthetic = true;
  return s;
}

}  // namespace spikets
