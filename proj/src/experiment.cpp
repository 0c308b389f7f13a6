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

#include "spikets/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "spikets/errors.hpp"
#include "spikets/fetch.hpp"
#include "spikets/rng.hpp"
#include "util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace spikets {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void log_line(const RunContext& ctx, const std::string& msg) {
  if (ctx.log) *ctx.log << msg << '\n' << std::flush;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::string body;
  for (const auto& l : lines) body += l + '\n';
  util::write_file_atomic(path, body);
}

json coding_json(const CodingStats& s) {
  return {{"total_spike_count", s.total_spike_count},
          {"mean_spike_rate", s.mean_spike_rate},
          {"input_size", s.input_size},
          {"samples", s.samples}};
}

json counters_json(const SparsityReport& r) {
  return {{"synaptic_updates", r.counters.synaptic_updates},
          {"neuron_updates", r.counters.neuron_updates},
          {"dense_equivalent_macs", r.counters.dense_equivalent_macs},
          {"synaptic_ratio", r.synaptic_ratio},
          {"neuron_ratio", r.neuron_ratio},
          {"snn_parameters", r.snn_parameters}};
}

std::vector<SpikeRaster> rasters_of(const std::vector<LabeledRaster>& v) {
  std::vector<SpikeRaster> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.raster);
  return out;
}

// Normalizes with train statistics and pads both splits to a common length.
void preprocess(DatasetSplits& s, const ExperimentConfig& cfg) {
  if (cfg.dataset.normalize) znormalize(s.train, &s.test);
  const std::size_t target = std::max(s.train.series_length, s.test.series_length);
  pad_to_equal_length(s.train, cfg.dataset.pad, target);
  pad_to_equal_length(s.test, cfg.dataset.pad, target);
}

}  // namespace

DatasetSplits resolve_dataset(const ExperimentConfig& cfg, const RunContext& ctx) {
  const auto& d = cfg.dataset;
  if (d.name.empty()) throw ConfigError("dataset.name is required");
  ParseOptions popts;
  popts.missing = d.missing;
  const auto manifest = find_manifest(d.name);
  const std::string name = manifest ? manifest->name : d.name;

  if (!d.path.empty()) {
    auto s = load_splits(d.path, name, popts);
    if (manifest) check_against_manifest(*manifest, s.train, s.test);
    return s;
  }
  if (!manifest) {
    throw ConfigError("dataset '" + d.name + "' has no built-in manifest; set dataset.path");
  }
  try {
    FetchOptions fo;
    fo.cache_dir = ctx.cache_dir;
    fo.allow_network = ctx.allow_network;
    const auto files = fetch_dataset(*manifest, fo);
    auto s = load_splits(files.dataset_dir, manifest->name, popts);
    check_against_manifest(*manifest, s.train, s.test);
    return s;
  } catch (const ChecksumError&) {
    throw;
  } catch (const DataError& e) {
    if (!d.allow_synthetic) throw;
    log_line(ctx, std::string("warning: ") + e.what() + "; using synthetic stand-in");
    return make_synthetic(*manifest, cfg.seed);
  }
}

std::vector<LabeledRaster> encode_dataset(const TimeSeriesDataset& ds, const EncoderConfig& enc,
                                          const MinMax& mm) {
  std::vector<LabeledRaster> out;
  out.reserve(ds.size());
  if (enc.kind == EncoderKind::kTemporal) {
    const auto pop = build_default_population(ds.num_channels, enc.population);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      out.push_back({cuba_encode(ds.samples[i], pop, ds.original_lengths[i]), ds.labels[i]});
    }
  } else {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      auto scaled = minmax_scale(ds.samples[i], mm);
      for (auto& ch : scaled) {
        std::fill(ch.begin() + static_cast<std::ptrdiff_t>(ds.original_lengths[i]), ch.end(), 0.0);
      }
      out.push_back({rate_encode(scaled, enc.rate_window, enc.rate_max_spikes), ds.labels[i]});
    }
  }
  return out;
}

PreparedData prepare_data(const DatasetSplits& raw, const ExperimentConfig& cfg) {
  DatasetSplits s = raw;
  preprocess(s, cfg);
  const auto mm = channel_minmax(s.train);
  auto train_all = encode_dataset(s.train, cfg.encoder, mm);

  PreparedData p;
  p.dataset = s.train.name;
  p.synthetic = s.synthetic;
  p.class_names = s.train.class_names;
  p.test = encode_dataset(s.test, cfg.encoder, mm);
  p.input_size = train_all.front().raster.num_units();
  p.num_steps = train_all.front().raster.num_steps();

  // Stratified hold-out: per class, a seeded shuffle picks round(f * n_c).
  std::vector<bool> held(train_all.size(), false);
  if (cfg.dataset.validation_fraction > 0.0) {
    Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t c = 0; c < p.class_names.size(); ++c) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < train_all.size(); ++i) {
        if (train_all[i].label == c) idx.push_back(i);
      }
      rng.shuffle(idx);
      const auto n = static_cast<std::size_t>(
          std::floor(cfg.dataset.validation_fraction * static_cast<double>(idx.size()) + 0.5));
      for (std::size_t k = 0; k < std::min(n, idx.size() > 0 ? idx.size() - 1 : 0); ++k) {
        held[idx[k]] = true;
      }
    }
  }
  for (std::size_t i = 0; i < train_all.size(); ++i) {
    (held[i] ? p.validation : p.train).push_back(std::move(train_all[i]));
  }
  return p;
}

PreparedData prepare_data(const ExperimentConfig& cfg, const RunContext& ctx) {
  return prepare_data(resolve_dataset(cfg, ctx), cfg);
}

std::vector<std::size_t> architecture(const ExperimentConfig& cfg, std::size_t input_size,
                                      std::size_t num_classes) {
  std::vector<std::size_t> sizes{input_size};
  sizes.insert(sizes.end(), cfg.network.hidden_sizes.begin(), cfg.network.hidden_sizes.end());
  sizes.push_back(num_classes);
  return sizes;
}

const char* engine_name(Engine e) { return e == Engine::kStepwise ? "stepwise" : "event"; }

void score_predictions(EvalReport& r, std::size_t num_classes) {
  SPIKETS_REQUIRE(r.labels.size() == r.predictions.size(), "score: label/prediction count mismatch");
  r.num_samples = r.labels.size();
  r.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    SPIKETS_REQUIRE(r.labels[i] < num_classes && r.predictions[i] < num_classes,
                    "score: class index out of range");
    ++r.confusion[r.labels[i]][r.predictions[i]];
    if (r.labels[i] == r.predictions[i]) ++correct;
  }
  r.accuracy = r.num_samples ? static_cast<double>(correct) / static_cast<double>(r.num_samples) : 0.0;
  r.precision.assign(num_classes, 0.0);
  r.recall.assign(num_classes, 0.0);
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::size_t row = 0, col = 0;
    for (std::size_t k = 0; k < num_classes; ++k) {
      row += r.confusion[c][k];
      col += r.confusion[k][c];
    }
    const double tp = static_cast<double>(r.confusion[c][c]);
    if (col) r.precision[c] = tp / static_cast<double>(col);
    if (row) r.recall[c] = tp / static_cast<double>(row);
  }
}

std::string eval_report_json(const EvalReport& r) {
  json j = json::object();
  // nlohmann::json sorts keys, so the layout is stable across runs.
  j["type"] = "eval";
  j["dataset"] = r.dataset;
  j["synthetic"] = r.synthetic;
  j["engine"] = r.engine;
  j["num_samples"] = r.num_samples;
  j["accuracy"] = r.accuracy;
  j["mean_loss"] = r.mean_loss;
  j["confusion"] = r.confusion;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["labels"] = r.labels;
  j["predictions"] = r.predictions;
  j["coding"] = coding_json(r.coding);
  j["sparsity"] = r.sparsity ? counters_json(*r.sparsity) : json(nullptr);
  j["config_hash"] = r.config_hash;
  j["seed"] = r.seed;
  j["wall_time"] = r.wall_time;
  return j.dump();
}

EvalReport evaluate_network(const Network& net, const std::vector<LabeledRaster>& data,
                            std::size_t num_classes, Engine engine) {
  check_architecture(net);
  SPIKETS_REQUIRE(net.back().outputs() == num_classes,
                  "checkpoint has " + std::to_string(net.back().outputs()) +
                      " outputs, dataset has " + std::to_string(num_classes) + " classes");
  if (!data.empty()) {
    SPIKETS_REQUIRE(data.front().raster.num_units() == net.front().inputs(),
                    "checkpoint expects " + std::to_string(net.front().inputs()) +
                        " input units, encoding produces " +
                        std::to_string(data.front().raster.num_units()));
  }
  const auto t0 = Clock::now();
  EvalReport r;
  r.engine = engine_name(engine);
  OpCounters counters;
  std::optional<EventEngine> ev;
  if (engine == Engine::kEvent) ev.emplace(net);
  double loss = 0.0;
  for (const auto& s : data) {
    Vector counts;
    if (ev) {
      auto res = ev->run(s.raster);
      counters += res.counters;
      counts = std::move(res.output_counts);
    } else {
      counts = forward(net, s.raster, false).output_counts;
    }
    loss += loss_and_probs(counts, s.label).loss;
    r.labels.push_back(s.label);
    r.predictions.push_back(predict_class(counts));
  }
  score_predictions(r, num_classes);
  r.mean_loss = data.empty() ? 0.0 : loss / static_cast<double>(data.size());
  const auto rasters = rasters_of(data);
  r.coding = coding_stats(rasters, kRateReportWindow);
  if (ev) r.sparsity = sparsity_report(counters, net);
  r.wall_time = seconds_since(t0);
  return r;
}

TrainOutcome cmd_train(const ExperimentConfig& cfg, const RunContext& ctx) {
  const auto t0 = Clock::now();
  const auto data = prepare_data(cfg, ctx);
  const auto sizes = architecture(cfg, data.input_size, data.class_names.size());
  std::string arch;
  for (auto n : sizes) arch += (arch.empty() ? "" : "-") + std::to_string(n);
  log_line(ctx, "train: " + data.dataset + (data.synthetic ? " (synthetic)" : "") + ", " +
                    std::to_string(data.train.size()) + " train / " +
                    std::to_string(data.validation.size()) + " val / " +
                    std::to_string(data.test.size()) + " test, network " + arch + ", " +
                    std::to_string(data.num_steps) + " steps");

  const Network init = init_network(sizes, cfg.network.hyper(), cfg.seed);
  TrainerConfig tc = cfg.training;
  tc.seed = cfg.seed;
  const std::string hash = config_hash(cfg);

  std::vector<std::string> metrics;
  auto on_epoch = [&](const EpochMetrics& m) {
    json j = {{"type", "epoch"},
              {"epoch", m.epoch},
              {"train_loss", m.train_loss},
              {"train_acc", m.train_acc},
              {"val_loss", m.val_loss ? json(*m.val_loss) : json(nullptr)},
              {"val_acc", m.val_acc ? json(*m.val_acc) : json(nullptr)},
              {"config_hash", hash},
              {"seed", cfg.seed}};
    metrics.push_back(j.dump());
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << "epoch " << m.epoch << " loss " << m.train_loss
       << " acc " << m.train_acc;
    if (m.val_acc) os << " val_loss " << *m.val_loss << " val_acc " << *m.val_acc;
    os << " (" << std::setprecision(1) << m.wall_time << " s)";
    log_line(ctx, os.str());
  };

  TrainOutcome out;
  out.result = train(init, data.train, data.validation, tc, on_epoch);
  out.test_report = evaluate_network(out.result.best_layers, data.test, data.class_names.size(),
                                     Engine::kStepwise);
  out.test_report.dataset = data.dataset;
  out.test_report.synthetic = data.synthetic;
  out.test_report.config_hash = hash;
  out.test_report.seed = cfg.seed;
  out.test_report.wall_time = seconds_since(t0);

  json summary = {{"type", "summary"},
                  {"best_epoch", out.result.best_epoch},
                  {"test_accuracy", out.test_report.accuracy},
                  {"test_loss", out.test_report.mean_loss},
                  {"config_hash", hash},
                  {"seed", cfg.seed}};
  metrics.push_back(summary.dump());

  fs::create_directories(cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  util::write_file_atomic((dir / "config.json").string(), config_to_json(cfg));
  write_lines((dir / "metrics.jsonl").string(), metrics);
  out.checkpoint_path = (dir / "best.ckpt").string();
  save_checkpoint_file(out.checkpoint_path, out.result.best_layers);
  save_checkpoint_file((dir / "final.ckpt").string(), out.result.final_layers);
  util::write_file_atomic((dir / "report.json").string(), eval_report_json(out.test_report) + "\n");
  log_line(ctx, "test accuracy " + std::to_string(out.test_report.accuracy) + " (best epoch " +
                    std::to_string(out.result.best_epoch) + ")");
  return out;
}

EvalReport cmd_eval(const ExperimentConfig& cfg, const RunContext& ctx,
                    const std::string& checkpoint_path, Engine engine) {
  const auto t0 = Clock::now();
  const Network net = load_checkpoint_file(checkpoint_path);
  const auto data = prepare_data(cfg, ctx);
  auto r = evaluate_network(net, data.test, data.class_names.size(), engine);
  r.dataset = data.dataset;
  r.synthetic = data.synthetic;
  r.config_hash = config_hash(cfg);
  r.seed = cfg.seed;
  r.wall_time = seconds_since(t0);
  fs::create_directories(cfg.output_dir);
  util::write_file_atomic(
      (fs::path(cfg.output_dir) / (std::string("eval_") + engine_name(engine) + ".json")).string(),
      eval_report_json(r) + "\n");
  return r;
}

EncodeOutcome cmd_encode(const ExperimentConfig& cfg, const RunContext& ctx,
                         const std::string& raster_path, bool include_rate) {
  DatasetSplits s = resolve_dataset(cfg, ctx);
  preprocess(s, cfg);
  const auto mm = channel_minmax(s.train);

  EncodeOutcome out;
  std::vector<std::string> stats;
  const std::string hash = config_hash(cfg);
  auto record = [&](const char* method, const CodingStats& st) {
    stats.push_back(json{{"type", "coding"},
                         {"dataset", s.train.name},
                         {"synthetic", s.synthetic},
                         {"method", method},
                         {"stats", coding_json(st)},
                         {"config_hash", hash},
                         {"seed", cfg.seed}}
                        .dump());
  };

  std::ostringstream os;
  for (const auto* split : {&s.train, &s.test}) {
    for (const auto& r : encode_dataset(*split, cfg.encoder, mm)) {
      write_raster(os, r.raster, static_cast<int>(r.label));
      ++out.samples_written;
    }
  }
  if (auto parent = fs::path(raster_path).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  util::write_file_atomic(raster_path, os.str());

  EncoderConfig temporal = cfg.encoder;
  temporal.kind = EncoderKind::kTemporal;
  out.temporal = coding_stats(rasters_of(encode_dataset(s.train, temporal, mm)), kRateReportWindow);
  record("temporal", out.temporal);
  if (include_rate || cfg.encoder.kind == EncoderKind::kRate) {
    EncoderConfig rate = cfg.encoder;
    rate.kind = EncoderKind::kRate;
    out.rate = coding_stats(rasters_of(encode_dataset(s.train, rate, mm)), kRateReportWindow);
    record("rate", *out.rate);
  }
  write_lines(raster_path + ".stats.jsonl", stats);
  return out;
}

std::vector<CodingRow> bench_coding(const std::vector<std::string>& datasets,
                                    const ExperimentConfig& base, const RunContext& ctx) {
  std::vector<CodingRow> rows;
  for (const auto& name : datasets) {
    ExperimentConfig cfg = base;
    cfg.dataset.name = name;
    cfg.dataset.path.clear();
    DatasetSplits s = resolve_dataset(cfg, ctx);
    preprocess(s, cfg);
    const auto mm = channel_minmax(s.train);
    for (auto kind : {EncoderKind::kTemporal, EncoderKind::kRate}) {
      EncoderConfig enc = cfg.encoder;
      enc.kind = kind;
      CodingRow row;
      row.dataset = s.train.name;
      row.method = kind == EncoderKind::kTemporal ? "temporal" : "rate";
      row.synthetic = s.synthetic;
      row.stats = coding_stats(rasters_of(encode_dataset(s.train, enc, mm)), kRateReportWindow);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<CodingRow> cmd_bench_coding(const std::vector<std::string>& datasets,
                                        const ExperimentConfig& base, const RunContext& ctx) {
  auto rows = bench_coding(datasets, base, ctx);
  std::vector<std::string> lines;
  const std::string hash = config_hash(base);
  for (const auto& r : rows) {
    lines.push_back(json{{"type", "coding"},
                         {"dataset", r.dataset},
                         {"synthetic", r.synthetic},
                         {"method", r.method},
                         {"stats", coding_json(r.stats)},
                         {"config_hash", hash},
                         {"seed", base.seed}}
                        .dump());
  }
  fs::create_directories(base.output_dir);
  write_lines((fs::path(base.output_dir) / "bench_coding.jsonl").string(), lines);
  return rows;
}

void print_coding_table(std::ostream& os, const std::vector<CodingRow>& rows) {
  os << std::left << std::setw(40) << "dataset" << std::setw(10) << "coding" << std::right
     << std::setw(14) << "spike count" << std::setw(12) << "spike rate" << std::setw(12)
     << "input size" << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(40) << (r.dataset + (r.synthetic ? " (synthetic)" : ""))
       << std::setw(10) << r.method << std::right << std::fixed << std::setprecision(1)
       << std::setw(14) << r.stats.total_spike_count << std::setprecision(3) << std::setw(12)
       << r.stats.mean_spike_rate << std::setw(12) << r.stats.input_size << '\n';
  }
}

std::vector<ParamRow> reference_parameter_rows() {
  const std::vector<std::size_t> rec{9, 300, 300, 25};
  const std::vector<std::size_t> snn{45, 300, 300, 25};
  std::vector<ParamRow> rows;
  rows.push_back({"LSTM", rec, lstm_parameter_count(rec), 1103125, false, ""});
  rows.push_back({"RNN", rec, rnn_parameter_count(rec), 281425, false, ""});
  ParamRow s{"SNN", snn, snn_parameter_count(snn), 125880, false, ""};
  for (auto& r : rows) r.discrepancy = r.parameters != *r.published_value;
  s.discrepancy = s.parameters != *s.published_value;
  if (s.discrepancy) {
    s.note = "weight count 45*300+300*300+300*25 = " + std::to_string(s.parameters) +
             "; published figure 125880 differs by " +
             std::to_string(*s.published_value - s.parameters);
  }
  rows.push_back(s);
  return rows;
}

BenchEventOutcome cmd_bench_event(const ExperimentConfig& cfg, const RunContext& ctx,
                                  const std::string& checkpoint_path) {
  BenchEventOutcome out;
  out.report = cmd_eval(cfg, ctx, checkpoint_path, Engine::kEvent);
  out.sparsity = *out.report.sparsity;
  out.parameters = reference_parameter_rows();
  const std::string hash = config_hash(cfg);
  std::vector<std::string> lines;
  lines.push_back(json{{"type", "sparsity"},
                       {"dataset", out.report.dataset},
                       {"synthetic", out.report.synthetic},
                       {"counters", counters_json(out.sparsity)},
                       {"accuracy", out.report.accuracy},
                       {"config_hash", hash},
                       {"seed", cfg.seed}}
                      .dump());
  for (const auto& p : out.parameters) {
    lines.push_back(json{{"type", "parameters"},
                         {"model", p.model},
                         {"sizes", p.sizes},
                         {"parameters", p.parameters},
                         {"published", p.published_value ? json(*p.published_value) : json(nullptr)},
                         {"discrepancy", p.discrepancy},
                         {"note", p.note}}
                        .dump());
  }
  write_lines((fs::path(cfg.output_dir) / "bench_event.jsonl").string(), lines);
  return out;
}

GradcheckOutcome cmd_gradcheck(std::uint64_t seed, const GradcheckOptions& opts,
                               const std::string& out_dir) {
  SPIKETS_REQUIRE(opts.max_units >= 2 && opts.max_steps >= 2, "gradcheck: sizes too small");
  Rng rng(seed);
  GradcheckOutcome out;
  std::vector<std::string> lines;
  auto pick = [&](std::size_t lo, std::size_t hi) { return lo + rng.below(hi - lo + 1); };
  for (std::size_t n = 0; n < opts.networks; ++n) {
    std::vector<std::size_t> sizes{pick(2, opts.max_units)};
    const std::size_t hidden = pick(0, 2);
    for (std::size_t h = 0; h < hidden; ++h) sizes.push_back(pick(2, opts.max_units));
    sizes.push_back(pick(2, opts.max_units));
    const double tau_m = rng.uniform(5.0, 30.0);
    const NeuronHyperParams hyper(tau_m, rng.uniform(1.0, tau_m / 1.5), rng.uniform(5.0, 30.0),
                                  rng.uniform(0.5, 1.5));
    Network net = init_network(sizes, hyper, rng.next());
    const double scale = rng.uniform(1.0, 3.0);
    for (auto& l : net) {
      for (double& w : l.weights.data()) w *= scale;
    }
    const std::size_t steps = pick(5, opts.max_steps);
    SpikeRaster input(sizes.front(), steps);
    for (std::size_t u = 0; u < sizes.front(); ++u) {
      for (std::size_t t = 0; t < steps; ++t) {
        if (rng.bernoulli(0.3)) input.set(u, t);
      }
    }
    const std::size_t label = rng.below(sizes.back());
    const auto r = gradcheck_smoothed(net, input, label, opts.perturbation);
    out.max_relative_error = std::max(out.max_relative_error, r.max_relative_error);
    out.weights_checked += r.weights_checked;
    lines.push_back(json{{"type", "gradcheck"},
                         {"network", n},
                         {"sizes", sizes},
                         {"steps", steps},
                         {"max_relative_error", r.max_relative_error},
                         {"max_abs_gradient", r.max_abs_gradient},
                         {"weights_checked", r.weights_checked},
                         {"denominator_floor", r.denominator_floor},
                         {"entries_below_floor", r.entries_below_floor},
                         {"seed", seed}}
                        .dump());
  }
  out.passed = out.max_relative_error < opts.threshold;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_lines((fs::path(out_dir) / "gradcheck.jsonl").string(), lines);
  }
  return out;
}

}  // namespace spikets
