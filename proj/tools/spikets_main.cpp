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

// spikets command-line harness.
//
// Exit codes: 0 ok, 1 other error, 2 config/usage, 3 data, 4 numeric,
// 5 contract (shape mismatch and the like).

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spikets/config.hpp"
#include "spikets/errors.hpp"
#include "spikets/experiment.hpp"
#include "spikets/fetch.hpp"

namespace {

using namespace spikets;

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kData = 3, kNumeric = 4, kContract = 5 };

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string cache_dir;
  std::string out;
  std::string engine = "stepwise";
  std::string dataset;
  bool offline = false;
  bool quiet = false;
};

ExperimentConfig make_config(const Globals& g) {
  ExperimentConfig cfg = g.config_path.empty() ? ExperimentConfig{} : load_config_file(g.config_path);
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.training.seed = *g.seed;
  }
  if (!g.out.empty()) cfg.output_dir = g.out;
  if (!g.dataset.empty()) {
    cfg.dataset.name = g.dataset;
    cfg.dataset.path.clear();
  }
  return cfg;
}

RunContext make_context(const Globals& g) {
  RunContext ctx;
  ctx.cache_dir = g.cache_dir;
  ctx.allow_network = !g.offline;
  ctx.log = g.quiet ? nullptr : &std::cerr;
  return ctx;
}

Engine parse_engine(const std::string& s) {
  if (s == "stepwise") return Engine::kStepwise;
  if (s == "event") return Engine::kEvent;
  throw ConfigError("--engine must be 'stepwise' or 'event'");
}

void print_eval(const EvalReport& r) {
  std::cout << "dataset " << r.dataset << (r.synthetic ? " (synthetic)" : "") << ", engine "
            << r.engine << ", " << r.num_samples << " samples\n";
  std::cout << std::fixed << std::setprecision(4) << "accuracy " << r.accuracy << ", mean loss "
            << r.mean_loss << '\n';
  std::cout << "confusion (rows true, columns predicted):\n";
  for (const auto& row : r.confusion) {
    for (auto v : row) std::cout << std::setw(6) << v;
    std::cout << '\n';
  }
  for (std::size_t c = 0; c < r.precision.size(); ++c) {
    std::cout << "class " << c << " precision " << r.precision[c] << " recall " << r.recall[c]
              << '\n';
  }
  if (r.sparsity) {
    const auto& s = *r.sparsity;
    std::cout << "synaptic updates " << s.counters.synaptic_updates << ", neuron updates "
              << s.counters.neuron_updates << ", dense MACs " << s.counters.dense_equivalent_macs
              << "\nsynaptic ratio " << s.synaptic_ratio << ", neuron ratio " << s.neuron_ratio
              << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spikets: spiking networks for multivariate time-series classification"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "Experiment config (JSON)");
  app.add_option("--seed", g.seed, "Override the config seed");
  app.add_option("--cache-dir", g.cache_dir,
                 std::string("Dataset cache root (default $") + kCacheEnvVar + ")");
  app.add_option("--out", g.out, "Output directory (overrides output_dir)");
  app.add_option("--engine", g.engine, "Inference engine")->check(CLI::IsMember({"stepwise", "event"}));
  app.add_option("--dataset", g.dataset, "Dataset name (overrides the config)");
  app.add_flag("--offline", g.offline, "Never touch the network; cache only");
  app.add_flag("-q,--quiet", g.quiet, "No progress output");

  auto* encode = app.add_subcommand("encode", "Encode a dataset into spike rasters");
  std::string encode_input, raster_path;
  bool with_rate = false;
  encode->add_option("--input", encode_input, "Directory with <name>_TRAIN.ts/_TEST.ts");
  encode->add_option("--rasters", raster_path, "Raster output file (default <out>/rasters.txt)");
  encode->add_flag("--rate", with_rate, "Also report rate-coding statistics");

  app.add_subcommand("train", "Train a network; writes checkpoints, metrics and a test report");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on the test split");
  std::string checkpoint;
  eval->add_option("--checkpoint", checkpoint, "Checkpoint (default <out>/best.ckpt)");

  auto* bench_coding_cmd = app.add_subcommand("bench-coding", "Temporal vs rate coding table");
  std::vector<std::string> coding_sets{"ArticularyWordRecognition", "BasicMotions",
                                       "FingerMovements", "AtrialFibrillation"};
  bool allow_synthetic = false;
  bench_coding_cmd->add_option("datasets", coding_sets, "Dataset names");
  bench_coding_cmd->add_flag("--allow-synthetic", allow_synthetic,
                             "Use shape-matched synthetic data for unavailable datasets");

  auto* bench_event = app.add_subcommand("bench-event", "Event-driven sparsity and parameter counts");
  bench_event->add_option("--checkpoint", checkpoint, "Checkpoint (default <out>/best.ckpt)");

  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of BPTT gradients");
  GradcheckOptions gopts;
  gradcheck->add_option("--networks", gopts.networks, "Random networks to check");
  gradcheck->add_option("--perturbation", gopts.perturbation, "Central-difference step");
  gradcheck->add_option("--max-units", gopts.max_units, "Max units per layer");
  gradcheck->add_option("--max-steps", gopts.max_steps, "Max time steps");

  auto* fetch = app.add_subcommand("fetch", "Download and cache datasets");
  std::vector<std::string> fetch_names;
  std::string from_dir;
  fetch->add_option("datasets", fetch_names, "Dataset names (default: all with manifests)");
  fetch->add_option("--from", from_dir, "Import <name>_TRAIN.ts/_TEST.ts from a local directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    auto cfg = make_config(g);
    const auto ctx = make_context(g);
    const auto default_ckpt = [&] {
      return checkpoint.empty() ? (std::filesystem::path(cfg.output_dir) / "best.ckpt").string()
                                : checkpoint;
    };

    if (*encode) {
      if (!encode_input.empty()) cfg.dataset.path = encode_input;
      const std::string path = raster_path.empty()
                                   ? (std::filesystem::path(cfg.output_dir) / "rasters.txt").string()
                                   : raster_path;
      const auto r = cmd_encode(cfg, ctx, path, with_rate);
      std::cout << "wrote " << r.samples_written << " rasters to " << path << '\n';
      std::vector<CodingRow> rows{{cfg.dataset.name, "temporal", r.temporal, false}};
      if (r.rate) rows.push_back({cfg.dataset.name, "rate", *r.rate, false});
      print_coding_table(std::cout, rows);
    } else if (app.got_subcommand("train")) {
      const auto r = cmd_train(cfg, ctx);
      std::cout << "checkpoint " << r.checkpoint_path << '\n';
      print_eval(r.test_report);
    } else if (*eval) {
      print_eval(cmd_eval(cfg, ctx, default_ckpt(), parse_engine(g.engine)));
    } else if (*bench_coding_cmd) {
      cfg.dataset.allow_synthetic = cfg.dataset.allow_synthetic || allow_synthetic;
      print_coding_table(std::cout, cmd_bench_coding(coding_sets, cfg, ctx));
    } else if (*bench_event) {
      const auto r = cmd_bench_event(cfg, ctx, default_ckpt());
      print_eval(r.report);
      std::cout << "\nmodel  sizes            parameters  published\n";
      for (const auto& p : r.parameters) {
        std::string sizes;
        for (auto n : p.sizes) sizes += (sizes.empty() ? "" : "-") + std::to_string(n);
        std::cout << std::left << std::setw(7) << p.model << std::setw(17) << sizes << std::right
                  << std::setw(10) << p.parameters << std::setw(11)
                  << (p.published_value ? std::to_string(*p.published_value) : "-")
                  << (p.discrepancy ? "  DISCREPANCY: " + p.note : "") << '\n';
      }
    } else if (*gradcheck) {
      const auto r = cmd_gradcheck(cfg.seed, gopts, cfg.output_dir);
      std::cout << std::scientific << "max relative error " << r.max_relative_error << " over "
                << r.weights_checked << " weights: " << (r.passed ? "PASS" : "FAIL") << '\n';
      return r.passed ? kOk : kNumeric;
    } else if (*fetch) {
      if (fetch_names.empty()) {
        for (const auto& m : builtin_manifests()) fetch_names.push_back(m.name);
      }
      for (const auto& name : fetch_names) {
        const auto m = find_manifest(name);
        if (!m) throw ConfigError("no manifest for dataset '" + name + "'");
        FetchedFiles f;
        if (!from_dir.empty()) {
          f = import_dataset(*m, from_dir, g.cache_dir);
        } else {
          FetchOptions fo;
          fo.cache_dir = g.cache_dir;
          fo.allow_network = !g.offline;
          f = fetch_dataset(*m, fo);
        }
        const auto s = load_splits(f.dataset_dir, m->name);
        check_against_manifest(*m, s.train, s.test);
        std::cout << m->name << ": " << (f.cache_hit ? "cached" : "stored") << " in "
                  << f.dataset_dir << " (" << s.train.size() << "/" << s.test.size() << ")\n";
      }
    }
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kContract;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
}
