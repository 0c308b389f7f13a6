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

#include "spikets/config.hpp"

#include <filesystem>
#include <initializer_list>
#include <string_view>

#include <json.hpp>

#include "spikets/errors.hpp"
#include "spikets/fetch.hpp"
#include "util.hpp"

namespace spikets {

using nlohmann::json;

namespace {

// Walks one JSON object, rejecting keys nobody asked for.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.emplace_back(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where_ + "." + key + ": wrong type (" + it->type_name() + ")");
    }
  }

  const json* child(const char* key) {
    seen_.emplace_back(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string path(const char* key) const { return where_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
        throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
      }
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::vector<std::string> seen_;
};

template <typename E>
E parse_enum(const std::string& where, const std::string& value,
             std::initializer_list<std::pair<const char*, E>> options) {
  std::string allowed;
  for (const auto& [name, e] : options) {
    if (value == name) return e;
    allowed += std::string(allowed.empty() ? "" : ", ") + name;
  }
  throw ConfigError(where + ": '" + value + "' is not one of {" + allowed + "}");
}

const char* pad_name(PadPolicy p) {
  return p == PadPolicy::kZeroPadEnd ? "zero_pad_end" : "repeat_last";
}
const char* missing_name(MissingPolicy p) {
  return p == MissingPolicy::kInterpolate ? "interpolate" : "fail";
}
const char* encoder_name(EncoderKind k) { return k == EncoderKind::kTemporal ? "temporal" : "rate"; }
const char* mode_name(SpikeMode m) { return m == SpikeMode::kSpiking ? "spiking" : "smoothed"; }

json to_json_obj(const ExperimentConfig& c) {
  const auto& p = c.encoder.population;
  const auto& t = c.training;
  return json{
      {"config_version", c.config_version},
      {"seed", c.seed},
      {"output_dir", c.output_dir},
      {"dataset",
       {{"name", c.dataset.name},
        {"path", c.dataset.path},
        {"allow_synthetic", c.dataset.allow_synthetic},
        {"normalize", c.dataset.normalize},
        {"pad", pad_name(c.dataset.pad)},
        {"missing", missing_name(c.dataset.missing)},
        {"validation_fraction", c.dataset.validation_fraction}}},
      {"encoder",
       {{"kind", encoder_name(c.encoder.kind)},
        {"population_size", p.population_size},
        {"tau_min", p.tau_min},
        {"tau_max", p.tau_max},
        {"gain_magnitudes", p.gain_magnitudes},
        {"v_th", p.v_th},
        {"dt", p.dt},
        {"upsample", p.upsample_factor},
        {"rate_window", c.encoder.rate_window},
        {"rate_max_spikes", c.encoder.rate_max_spikes}}},
      {"network",
       {{"hidden_sizes", c.network.hidden_sizes},
        {"tau_m", c.network.tau_m},
        {"tau_s", c.network.tau_s},
        {"tau", c.network.tau},
        {"v_th", c.network.v_th}}},
      {"training",
       {{"learning_rate", t.learning_rate},
        {"epochs", t.epochs},
        {"batch_size", t.batch_size},
        {"mode", mode_name(t.mode)},
        {"temperature", t.temperature},
        {"grad_clip", t.grad_clip},
        {"adam_beta1", t.adam.beta1},
        {"adam_beta2", t.adam.beta2},
        {"adam_epsilon", t.adam.epsilon}}},
  };
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(c.dataset.validation_fraction >= 0.0 && c.dataset.validation_fraction < 1.0,
          "dataset.validation_fraction must be in [0, 1)");
  require(c.encoder.population.population_size >= 2, "encoder.population_size must be >= 2");
  require(c.encoder.population.tau_min > 0 && c.encoder.population.tau_max >= c.encoder.population.tau_min,
          "encoder.tau_min/tau_max must satisfy 0 < tau_min <= tau_max");
  require(!c.encoder.population.gain_magnitudes.empty(), "encoder.gain_magnitudes must be non-empty");
  require(c.encoder.population.upsample_factor >= 1, "encoder.upsample must be >= 1");
  require(c.encoder.rate_window >= 1, "encoder.rate_window must be >= 1");
  for (auto h : c.network.hidden_sizes) require(h > 0, "network.hidden_sizes entries must be > 0");
  require(c.network.tau_m > c.network.tau_s && c.network.tau_s > 0 && c.network.tau > 0,
          "network: need tau_m > tau_s > 0 and tau > 0");
  require(c.network.v_th > 0, "network.v_th must be > 0");
  require(c.training.learning_rate > 0, "training.learning_rate must be > 0");
  require(c.training.batch_size >= 1, "training.batch_size must be >= 1");
  require(c.training.temperature > 0, "training.temperature must be > 0");
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  Reader root(j, "config");
  root.get("config_version", c.config_version);
  if (c.config_version != kConfigVersion) {
    throw ConfigError("unsupported config_version " + std::to_string(c.config_version) +
                      " (expected " + std::to_string(kConfigVersion) + ")");
  }
  root.get("seed", c.seed);
  root.get("output_dir", c.output_dir);

  if (const json* d = root.child("dataset")) {
    Reader r(*d, root.path("dataset"));
    std::string pad = pad_name(c.dataset.pad), missing = missing_name(c.dataset.missing);
    r.get("name", c.dataset.name);
    r.get("path", c.dataset.path);
    r.get("allow_synthetic", c.dataset.allow_synthetic);
    r.get("normalize", c.dataset.normalize);
    r.get("pad", pad);
    r.get("missing", missing);
    r.get("validation_fraction", c.dataset.validation_fraction);
    r.finish();
    c.dataset.pad = parse_enum<PadPolicy>(r.path("pad"), pad,
                                          {{"zero_pad_end", PadPolicy::kZeroPadEnd},
                                           {"repeat_last", PadPolicy::kRepeatLast}});
    c.dataset.missing = parse_enum<MissingPolicy>(r.path("missing"), missing,
                                                  {{"interpolate", MissingPolicy::kInterpolate},
                                                   {"fail", MissingPolicy::kFail}});
  }
  if (const json* e = root.child("encoder")) {
    Reader r(*e, root.path("encoder"));
    auto& p = c.encoder.population;
    std::string kind = encoder_name(c.encoder.kind);
    r.get("kind", kind);
    r.get("population_size", p.population_size);
    r.get("tau_min", p.tau_min);
    r.get("tau_max", p.tau_max);
    r.get("gain_magnitudes", p.gain_magnitudes);
    r.get("v_th", p.v_th);
    r.get("dt", p.dt);
    r.get("upsample", p.upsample_factor);
    r.get("rate_window", c.encoder.rate_window);
    r.get("rate_max_spikes", c.encoder.rate_max_spikes);
    r.finish();
    c.encoder.kind = parse_enum<EncoderKind>(r.path("kind"), kind,
                                             {{"temporal", EncoderKind::kTemporal},
                                              {"rate", EncoderKind::kRate}});
  }
  if (const json* n = root.child("network")) {
    Reader r(*n, root.path("network"));
    r.get("hidden_sizes", c.network.hidden_sizes);
    r.get("tau_m", c.network.tau_m);
    r.get("tau_s", c.network.tau_s);
    r.get("tau", c.network.tau);
    r.get("v_th", c.network.v_th);
    r.finish();
  }
  if (const json* t = root.child("training")) {
    Reader r(*t, root.path("training"));
    auto& tc = c.training;
    std::string mode = mode_name(tc.mode);
    r.get("learning_rate", tc.learning_rate);
    r.get("epochs", tc.epochs);
    r.get("batch_size", tc.batch_size);
    r.get("mode", mode);
    r.get("temperature", tc.temperature);
    r.get("grad_clip", tc.grad_clip);
    r.get("adam_beta1", tc.adam.beta1);
    r.get("adam_beta2", tc.adam.beta2);
    r.get("adam_epsilon", tc.adam.epsilon);
    r.finish();
    tc.mode = parse_enum<SpikeMode>(r.path("mode"), mode,
                                    {{"spiking", SpikeMode::kSpiking},
                                     {"smoothed", SpikeMode::kSmoothed}});
  }
  root.finish();
  c.training.seed = c.seed;
  validate(c);
  return c;
}

std::string config_to_json(const ExperimentConfig& c) { return to_json_obj(c).dump(2) + "\n"; }

ExperimentConfig load_config_file(const std::string& path) {
  std::string text;
  try {
    text = util::read_file(path);
  } catch (const DataError&) {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  auto c = config_from_json(text);
  if (!c.dataset.path.empty()) {
    std::filesystem::path p(c.dataset.path);
    if (p.is_relative()) {
      const auto base = std::filesystem::absolute(path).parent_path();
      c.dataset.path = (base / p).lexically_normal().string();
    }
  }
  return c;
}

std::string config_hash(const ExperimentConfig& c) {
  auto j = to_json_obj(c);
  j.erase("output_dir");  // where results land is not part of the experiment
  return sha256_hex(j.dump());
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return to_json_obj(a) == to_json_obj(b);
}

}  // namespace spikets
