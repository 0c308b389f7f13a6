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
#include <string>
#include <vector>

#include "spikets/data.hpp"
#include "spikets/encoding.hpp"
#include "spikets/network.hpp"
#include "spikets/training.hpp"

namespace spikets {

inline constexpr int kConfigVersion = 1;

struct DatasetConfig {
  std::string name;
  // Directory holding <name>_TRAIN.ts / <name>_TEST.ts. Empty: fetch through
  // the cache. Relative paths resolve against the config file's directory.
  std::string path;
  bool allow_synthetic = false;  // fall back to make_synthetic when unavailable
  bool normalize = true;
  PadPolicy pad = PadPolicy::kZeroPadEnd;
  MissingPolicy missing = MissingPolicy::kInterpolate;
  double validation_fraction = 0.2;
};

enum class EncoderKind { kTemporal, kRate };

struct EncoderConfig {
  EncoderKind kind = EncoderKind::kTemporal;
  PopulationOptions population;
  std::size_t rate_window = 300;
  std::size_t rate_max_spikes = 300;
};

struct NetworkConfig {
  std::vector<std::size_t> hidden_sizes{500, 500, 500};
  double tau_m = 20.0;
  double tau_s = 5.0;
  double tau = 20.0;
  double v_th = 1.0;

  NeuronHyperParams hyper() const { return {tau_m, tau_s, tau, v_th}; }
};

struct ExperimentConfig {
  int config_version = kConfigVersion;
  DatasetConfig dataset;
  EncoderConfig encoder;
  NetworkConfig network;
  TrainerConfig training;
  std::string output_dir = "runs/default";
  std::uint64_t seed = 1;
};

// JSON text. Unknown keys, wrong types and unsupported versions throw
// ConfigError; missing keys keep their defaults.
ExperimentConfig config_from_json(const std::string& text);
// Every field is written, so from_json(to_json(c)) == c.
std::string config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config_file(const std::string& path);

// SHA-256 of the canonical JSON form, output_dir excluded.
std::string config_hash(const ExperimentConfig& c);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace spikets
