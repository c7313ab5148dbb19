// Copyright 2026 The frets Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "frets/run_config.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "frets/errors.hpp"

namespace frets {
namespace {

using nlohmann::json;

json parse_object(std::string_view text, const char* what) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object");
  return j;
}

void reject_unknown(const json& j, const std::set<std::string>& known, const char* what) {
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key))
      throw ConfigError(std::string(what) + ": unknown key '" + key + "'");
  }
}

std::size_t get_size(const json& j, const std::string& key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError("'" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::uint64_t get_u64(const json& j, const std::string& key, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ConfigError("'" + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

double get_double(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  return v.get<double>();
}

bool get_bool(const json& j, const std::string& key, bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError("'" + key + "' must be true or false");
  return v.get<bool>();
}

std::string get_string(const json& j, const std::string& key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
  return v.get<std::string>();
}

Activation parse_activation(const std::string& s, const std::string& key) {
  if (s == "relu") return Activation::kRelu;
  if (s == "identity") return Activation::kIdentity;
  throw ConfigError("'" + key + "' must be \"relu\" or \"identity\", got \"" + s + "\"");
}

LearnerDomain parse_domain(const std::string& s) {
  if (s == "frequency") return LearnerDomain::kFrequency;
  if (s == "time") return LearnerDomain::kTime;
  throw ConfigError("'learner_domain' must be \"frequency\" or \"time\", got \"" + s + "\"");
}

MissingPolicy parse_missing(const std::string& s) {
  if (s == "error") return MissingPolicy::kError;
  if (s == "forward_fill") return MissingPolicy::kForwardFill;
  throw ConfigError("'missing_policy' must be \"error\" or \"forward_fill\", got \"" + s +
                    "\"");
}

}  // namespace

const char* to_string(Activation a) {
  return a == Activation::kRelu ? "relu" : "identity";
}

const char* to_string(LearnerDomain d) {
  return d == LearnerDomain::kFrequency ? "frequency" : "time";
}

const char* to_string(MissingPolicy p) {
  return p == MissingPolicy::kError ? "error" : "forward_fill";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return ss.str();
}

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  const json j = parse_object(json_text, "run config");
  reject_unknown(j,
                 {"dataset", "timestamp_column", "missing_policy", "split", "lookback",
                  "horizon", "embed_dim", "hidden_dim", "fremlp_layers",
                  "use_channel_learner", "use_temporal_learner", "channel_independent",
                  "learner_domain", "learner_activation", "projection_activation", "lr",
                  "batch_size", "epochs", "patience", "eval_batch_size", "seed",
                  "output_dir"},
                 "run config");
  for (const char* key : {"dataset", "lookback", "horizon"}) {
    if (!j.contains(key)) throw ConfigError(std::string("run config: missing '") + key + "'");
  }

  RunConfig rc;
  std::filesystem::path dataset = get_string(j, "dataset", "");
  if (dataset.empty()) throw ConfigError("run config: 'dataset' is empty");
  rc.dataset = dataset.is_relative() && !base_dir.empty() ? base_dir / dataset : dataset;

  rc.csv.timestamp_column = get_bool(j, "timestamp_column", false);
  rc.csv.missing = parse_missing(get_string(j, "missing_policy", "error"));

  if (j.contains("split")) {
    const json& s = j.at("split");
    if (!s.is_array() || s.size() != 3 || !s[0].is_number() || !s[1].is_number() ||
        !s[2].is_number())
      throw ConfigError("'split' must be an array of three numbers");
    rc.split = {s[0].get<double>(), s[1].get<double>(), s[2].get<double>()};
  }
  rc.split.validate();

  ModelConfig& m = rc.model;
  m.lookback = get_size(j, "lookback", m.lookback);
  m.horizon = get_size(j, "horizon", m.horizon);
  m.embed_dim = get_size(j, "embed_dim", m.embed_dim);
  m.hidden_dim = get_size(j, "hidden_dim", m.hidden_dim);
  m.fremlp_layers = get_size(j, "fremlp_layers", m.fremlp_layers);
  m.use_channel_learner = get_bool(j, "use_channel_learner", m.use_channel_learner);
  m.use_temporal_learner = get_bool(j, "use_temporal_learner", m.use_temporal_learner);
  m.channel_independent = get_bool(j, "channel_independent", m.channel_independent);
  m.domain = parse_domain(get_string(j, "learner_domain", "frequency"));
  m.learner_activation =
      parse_activation(get_string(j, "learner_activation", "relu"), "learner_activation");
  m.projection_activation = parse_activation(get_string(j, "projection_activation", "relu"),
                                             "projection_activation");

  TrainConfig& t = rc.train;
  t.lr = get_double(j, "lr", t.lr);
  t.batch_size = get_size(j, "batch_size", t.batch_size);
  t.epochs = get_size(j, "epochs", t.epochs);
  t.patience = get_size(j, "patience", t.patience);
  t.eval_batch_size = get_size(j, "eval_batch_size", t.eval_batch_size);
  t.seed = get_u64(j, "seed", t.seed);
  m.seed = t.seed;

  std::filesystem::path out = get_string(j, "output_dir", "out");
  rc.output_dir = out.is_relative() && !base_dir.empty() ? base_dir / out : out;

  m.validate();
  t.validate();
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_text_file(path), path.parent_path());
}

SynthFileSpec parse_synth_spec(std::string_view json_text) {
  const json j = parse_object(json_text, "synth spec");
  reject_unknown(j,
                 {"channels", "length", "period_base", "noise_std", "seed", "components",
                  "file"},
                 "synth spec");
  for (const char* key : {"channels", "length"}) {
    if (!j.contains(key)) throw ConfigError(std::string("synth spec: missing '") + key + "'");
  }
  SynthFileSpec out;
  SynthSpec& s = out.spec;
  s.channels = get_size(j, "channels", 0);
  s.length = get_size(j, "length", 0);
  s.period_base = get_size(j, "period_base", 0);
  s.noise_std = get_double(j, "noise_std", 0.0);
  s.seed = get_u64(j, "seed", 0);
  out.file = get_string(j, "file", out.file);
  if (s.channels == 0 || s.length == 0)
    throw ConfigError("synth spec: channels and length must be positive");
  if (!(s.noise_std >= 0.0)) throw ConfigError("synth spec: noise_std must be >= 0");
  if (out.file.empty() || std::filesystem::path(out.file).has_parent_path())
    throw ConfigError("synth spec: 'file' must be a plain file name");

  if (j.contains("components")) {
    const json& comps = j.at("components");
    if (!comps.is_array()) throw ConfigError("synth spec: 'components' must be an array");
    for (const json& c : comps) {
      if (!c.is_object()) throw ConfigError("synth spec: each component must be an object");
      reject_unknown(c, {"channel", "cycles", "amplitude", "phase"}, "synth component");
      SinusoidComponent comp;
      comp.channel = get_size(c, "channel", 0);
      comp.cycles = get_double(c, "cycles", comp.cycles);
      comp.amplitude = get_double(c, "amplitude", comp.amplitude);
      comp.phase = get_double(c, "phase", comp.phase);
      if (comp.channel >= s.channels)
        throw ConfigError("synth spec: component channel " + std::to_string(comp.channel) +
                          " out of range for " + std::to_string(s.channels) + " channels");
      s.components.push_back(comp);
    }
  }
  return out;
}

SynthFileSpec load_synth_spec(const std::filesystem::path& path) {
  return parse_synth_spec(read_text_file(path));
}

}  // namespace frets
