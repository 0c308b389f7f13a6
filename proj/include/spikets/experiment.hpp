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
#include <optional>
#include <string>
#include <vector>

#include "spikets/config.hpp"
#include "spikets/encoding.hpp"
#include "spikets/event_inference.hpp"
#include "spikets/training.hpp"

namespace spikets {

struct RunContext {
  std::string cache_dir;        // empty: default_cache_dir()
  bool allow_network = true;
  std::ostream* log = nullptr;  // progress lines; null for silence
};

// Dataset for `cfg`: the configured directory, else the cache (fetching if
// allowed), else a synthetic stand-in when cfg.dataset.allow_synthetic.
DatasetSplits resolve_dataset(const ExperimentConfig& cfg, const RunContext& ctx);

struct PreparedData {
  std::string dataset;
  bool synthetic = false;
  std::vector<std::string> class_names;
  std::vector<LabeledRaster> train;       // after the validation hold-out
  std::vector<LabeledRaster> validation;
  std::vector<LabeledRaster> test;
  std::size_t input_size = 0;
  std::size_t num_steps = 0;
};

// Normalize (train statistics), pad, encode, and hold out a stratified,
// seeded validation fraction of train.
PreparedData prepare_data(const DatasetSplits& splits, const ExperimentConfig& cfg);
PreparedData prepare_data(const ExperimentConfig& cfg, const RunContext& ctx);

// Encodes every sample of `ds` after normalization/padding have been applied.
// `mm` is only used by rate coding (train-split min/max).
std::vector<LabeledRaster> encode_dataset(const TimeSeriesDataset& ds, const EncoderConfig& enc,
                                          const MinMax& mm);

// input, hidden..., classes
std::vector<std::size_t> architecture(const ExperimentConfig& cfg, std::size_t input_size,
                                      std::size_t num_classes);

enum class Engine { kStepwise, kEvent };
const char* engine_name(Engine e);

struct EvalReport {
  std::string dataset;
  bool synthetic = false;
  std::string engine;
  std::size_t num_samples = 0;
  double accuracy = 0.0;
  double mean_loss = 0.0;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::vector<double> precision;                     // per class; 0 when undefined
  std::vector<double> recall;
  std::vector<std::size_t> labels;
  std::vector<std::size_t> predictions;
  CodingStats coding;
  std::optional<SparsityReport> sparsity;  // event engine only
  std::string config_hash;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds; excluded from determinism checks
};

// Fills confusion, precision, recall and accuracy from labels/predictions.
void score_predictions(EvalReport& r, std::size_t num_classes);
// One JSON object, no trailing newline. Key order is fixed.
std::string eval_report_json(const EvalReport& r);

EvalReport evaluate_network(const Network& net, const std::vector<LabeledRaster>& data,
                            std::size_t num_classes, Engine engine);

struct TrainOutcome {
  TrainResult result;
  EvalReport test_report;
  std::string checkpoint_path;  // best.ckpt
};

// Writes <out>/{config.json, metrics.jsonl, best.ckpt, final.ckpt, report.json}.
// metrics.jsonl holds no wall-clock fields; report.json keeps them under
// "wall_time".
TrainOutcome cmd_train(const ExperimentConfig& cfg, const RunContext& ctx);

// Writes <out>/eval_<engine>.json.
EvalReport cmd_eval(const ExperimentConfig& cfg, const RunContext& ctx,
                    const std::string& checkpoint_path, Engine engine);

struct EncodeOutcome {
  CodingStats temporal;
  std::optional<CodingStats> rate;
  std::size_t samples_written = 0;
};

// Writes all train+test rasters of the configured encoder to `raster_path`
// (text format, label per record) and stats records to
// <raster_path>.stats.jsonl.
EncodeOutcome cmd_encode(const ExperimentConfig& cfg, const RunContext& ctx,
                         const std::string& raster_path, bool include_rate);

struct CodingRow {
  std::string dataset;
  std::string method;  // "temporal" or "rate"
  CodingStats stats;
  bool synthetic = false;
};

// Spike rates are normalized to a 100-step window for both methods.
inline constexpr std::size_t kRateReportWindow = 100;

std::vector<CodingRow> bench_coding(const std::vector<std::string>& datasets,
                                    const ExperimentConfig& base, const RunContext& ctx);
// Writes <out>/bench_coding.jsonl.
std::vector<CodingRow> cmd_bench_coding(const std::vector<std::string>& datasets,
                                        const ExperimentConfig& base, const RunContext& ctx);
void print_coding_table(std::ostream& os, const std::vector<CodingRow>& rows);

struct ParamRow {
  std::string model;
  std::vector<std::size_t> sizes;
  std::uint64_t parameters = 0;
  std::optional<std::uint64_t> published_value;
  bool discrepancy = false;
  std::string note;
};

// Analytic comparison rows (LSTM/RNN 9-300-300-25, SNN 45-300-300-25).
std::vector<ParamRow> reference_parameter_rows();

struct BenchEventOutcome {
  SparsityReport sparsity;
  std::vector<ParamRow> parameters;
  EvalReport report;
};

// Runs the event engine over the test split. Writes <out>/bench_event.jsonl.
BenchEventOutcome cmd_bench_event(const ExperimentConfig& cfg, const RunContext& ctx,
                                  const std::string& checkpoint_path);

struct GradcheckOptions {
  std::size_t networks = 20;
  std::size_t max_units = 10;
  std::size_t max_steps = 30;
  double perturbation = 1e-5;
  double threshold = 1e-4;
};

struct GradcheckOutcome {
  double max_relative_error = 0.0;
  std::size_t weights_checked = 0;
  bool passed = false;
};

// Smoothed-mode gradient check over random networks drawn from `seed`.
GradcheckOutcome cmd_gradcheck(std::uint64_t seed, const GradcheckOptions& opts,
                               const std::string& out_dir);

}  // namespace spikets
