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

#include "frets/checkpoint.hpp"

#include <bit>
#include <cstring>

#include <json.hpp>

#include "frets/errors.hpp"
#include "frets/run_config.hpp"

namespace frets {
namespace {

using nlohmann::json;

constexpr std::string_view kMagic = "FRETS-CHECKPOINT";

void append_doubles(std::string& out, std::span<const double> values) {
  for (double v : values) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
  }
}

double read_double(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return std::bit_cast<double>(bits);
}

Activation activation_from(const std::string& s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "identity") return Activation::kIdentity;
  throw ConfigError("checkpoint: unknown activation '" + s + "'");
}

json model_to_json(const ModelConfig& m) {
  return {{"lookback", m.lookback},
          {"horizon", m.horizon},
          {"channels", m.channels},
          {"embed_dim", m.embed_dim},
          {"hidden_dim", m.hidden_dim},
          {"fremlp_layers", m.fremlp_layers},
          {"use_channel_learner", m.use_channel_learner},
          {"use_temporal_learner", m.use_temporal_learner},
          {"channel_independent", m.channel_independent},
          {"learner_domain", to_string(m.domain)},
          {"learner_activation", to_string(m.learner_activation)},
          {"projection_activation", to_string(m.projection_activation)},
          {"seed", m.seed}};
}

ModelConfig model_from_json(const json& j) {
  ModelConfig m;
  m.lookback = j.at("lookback").get<std::size_t>();
  m.horizon = j.at("horizon").get<std::size_t>();
  m.channels = j.at("channels").get<std::size_t>();
  m.embed_dim = j.at("embed_dim").get<std::size_t>();
  m.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  m.fremlp_layers = j.at("fremlp_layers").get<std::size_t>();
  m.use_channel_learner = j.at("use_channel_learner").get<bool>();
  m.use_temporal_learner = j.at("use_temporal_learner").get<bool>();
  m.channel_independent = j.at("channel_independent").get<bool>();
  const std::string domain = j.at("learner_domain").get<std::string>();
  if (domain == "frequency") m.domain = LearnerDomain::kFrequency;
  else if (domain == "time") m.domain = LearnerDomain::kTime;
  else throw ConfigError("checkpoint: unknown learner_domain '" + domain + "'");
  m.learner_activation = activation_from(j.at("learner_activation").get<std::string>());
  m.projection_activation = activation_from(j.at("projection_activation").get<std::string>());
  m.seed = j.at("seed").get<std::uint64_t>();
  m.validate();
  return m;
}

/// Parameter layout implied by a config, with every tensor zero-filled.
FreTSParams layout_for(const ModelConfig& m) {
  FreTSParams p = init_params(m);
  return zeros_like(p);
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& c) {
  check_params(c.params, c.model);
  if (c.scaler.channels() != c.model.channels)
    throw DimensionError("checkpoint: scaler has " + std::to_string(c.scaler.channels()) +
                         " channels, model has " + std::to_string(c.model.channels));

  json tensors = json::array();
  std::string payload;
  auto add_block = [&](const std::string& name, const RealTensor& t) {
    tensors.push_back({{"name", name}, {"shape", t.shape()}});
    append_doubles(payload, t.values());
  };
  add_block("scaler.min", RealTensor::vector(c.scaler.min()));
  add_block("scaler.max", RealTensor::vector(c.scaler.max()));
  for_each_block(c.params, add_block);

  json header = {
      {"format_version", kCheckpointVersion},
      {"model", model_to_json(c.model)},
      {"split", {c.split.train, c.split.val, c.split.test}},
      {"csv",
       {{"timestamp_column", c.csv.timestamp_column},
        {"missing_policy", to_string(c.csv.missing)}}},
      {"channel_names", c.channel_names},
      {"summary",
       {{"epochs_run", c.summary.epochs_run},
        {"best_epoch", c.summary.best_epoch},
        {"best_val_mae", c.summary.best_val.mae},
        {"best_val_rmse", c.summary.best_val.rmse}}},
      {"tensors", tensors}};

  std::string out(kMagic);
  out += '\n';
  out += header.dump();
  out += "\nDATA " + std::to_string(payload.size()) + "\n";
  out += payload;
  return out;
}

Checkpoint parse_checkpoint(std::string_view bytes) {
  auto next_line = [&](std::size_t& pos) -> std::string_view {
    const std::size_t end = bytes.find('\n', pos);
    if (end == std::string_view::npos) throw IngestionError("checkpoint: truncated header");
    std::string_view line = bytes.substr(pos, end - pos);
    pos = end + 1;
    return line;
  };

  std::size_t pos = 0;
  if (next_line(pos) != kMagic) throw IngestionError("checkpoint: bad magic line");
  const std::string_view header_text = next_line(pos);
  const std::string_view data_line = next_line(pos);

  json header;
  try {
    header = json::parse(header_text.begin(), header_text.end());
  } catch (const json::parse_error& e) {
    throw IngestionError(std::string("checkpoint: invalid header: ") + e.what());
  }

  Checkpoint c;
  try {
    const int version = header.at("format_version").get<int>();
    if (version != kCheckpointVersion)
      throw IngestionError("checkpoint: unsupported format_version " + std::to_string(version));
    c.model = model_from_json(header.at("model"));
    const json& split = header.at("split");
    c.split = {split.at(0).get<double>(), split.at(1).get<double>(),
               split.at(2).get<double>()};
    const json& csv = header.at("csv");
    c.csv.timestamp_column = csv.at("timestamp_column").get<bool>();
    c.csv.missing = csv.at("missing_policy").get<std::string>() == "forward_fill"
                        ? MissingPolicy::kForwardFill
                        : MissingPolicy::kError;
    c.channel_names = header.at("channel_names").get<std::vector<std::string>>();
    const json& summary = header.at("summary");
    c.summary.epochs_run = summary.at("epochs_run").get<std::size_t>();
    c.summary.best_epoch = summary.at("best_epoch").get<std::size_t>();
    c.summary.best_val.mae = summary.at("best_val_mae").get<double>();
    c.summary.best_val.rmse = summary.at("best_val_rmse").get<double>();
  } catch (const json::exception& e) {
    throw IngestionError(std::string("checkpoint: malformed header: ") + e.what());
  }

  if (!data_line.starts_with("DATA "))
    throw IngestionError("checkpoint: missing DATA line");
  const std::string size_text(data_line.substr(5));
  std::size_t payload_size = 0;
  try {
    payload_size = std::stoull(size_text);
  } catch (const std::exception&) {
    throw IngestionError("checkpoint: bad DATA size '" + size_text + "'");
  }
  if (bytes.size() - pos != payload_size)
    throw IngestionError("checkpoint: payload is " + std::to_string(bytes.size() - pos) +
                         " bytes, header says " + std::to_string(payload_size));
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
  std::size_t offset = 0;

  const json& tensors = header.at("tensors");
  std::size_t index = 0;
  auto read_block = [&](const std::string& name, RealTensor& t) {
    if (index >= tensors.size())
      throw IngestionError("checkpoint: missing tensor '" + name + "'");
    const json& entry = tensors.at(index++);
    const std::string stored = entry.at("name").get<std::string>();
    const Shape shape = entry.at("shape").get<Shape>();
    if (stored != name) {
      throw IngestionError("checkpoint: expected tensor '" + name + "', found '" + stored +
                           "'");
    }
    if (shape != t.shape()) {
      throw IngestionError("checkpoint: tensor '" + name + "' has shape " +
                           shape_to_string(shape) + ", expected " +
                           shape_to_string(t.shape()));
    }
    const std::size_t n = shape_numel(shape);
    if (offset + 8 * n > payload_size)
      throw IngestionError("checkpoint: payload too short for '" + name + "'");
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = read_double(data + offset + 8 * i);
    offset += 8 * n;
    t = RealTensor(shape, std::move(values));
  };

  RealTensor smin({c.model.channels}, 0.0), smax({c.model.channels}, 0.0);
  read_block("scaler.min", smin);
  read_block("scaler.max", smax);
  c.scaler = MinMaxScaler(std::vector<double>(smin.values().begin(), smin.values().end()),
                          std::vector<double>(smax.values().begin(), smax.values().end()));
  c.params = layout_for(c.model);
  for_each_block(c.params, read_block);
  if (index != tensors.size()) throw IngestionError("checkpoint: unexpected extra tensors");
  if (offset != payload_size) throw IngestionError("checkpoint: trailing payload bytes");
  if (c.channel_names.size() != c.model.channels)
    throw IngestionError("checkpoint: channel_names does not match model.channels");
  return c;
}

RealTensor forecast(const Checkpoint& c, const RealTensor& window) {
  const ModelConfig& m = c.model;
  if (window.rank() != 2 || window.dim(0) != m.channels || window.dim(1) != m.lookback) {
    throw DimensionError("forecast: window is " + shape_to_string(window.shape()) +
                         ", checkpoint expects [" + std::to_string(m.channels) + " x " +
                         std::to_string(m.lookback) + "]");
  }
  const RealTensor x = c.scaler.apply(window).reshaped({1, m.channels, m.lookback});
  const RealTensor y = frets_forward(x, c.params, m).reshaped({m.channels, m.horizon});
  return c.scaler.invert(y);
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return parse_checkpoint(read_text_file(path));
}

}  // namespace frets
