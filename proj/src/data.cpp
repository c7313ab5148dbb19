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

#include "frets/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "frets/errors.hpp"
#include "frets/random.hpp"

namespace frets {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(const std::string& field) {
  const std::string s = trim(field);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument(s);
  }
  return v;
}

void format_double(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

SeriesMatrix SeriesMatrix::slice(std::size_t begin, std::size_t end) const {
  if (begin >= end || end > length()) {
    throw DimensionError("series slice [" + std::to_string(begin) + ", " +
                         std::to_string(end) + ") invalid for length " +
                         std::to_string(length()));
  }
  const std::size_t n = channels(), t = length(), width = end - begin;
  RealTensor out({n, width});
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < width; ++i) out[c * width + i] = values[c * t + begin + i];
  return {std::move(out), names};
}

SeriesMatrix parse_csv(std::istream& in, const CsvOptions& options,
                       const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw IngestionError(source + ": missing header row");
  std::vector<std::string> names = split_fields(line);
  for (auto& name : names) name = trim(name);
  const std::size_t skip = options.timestamp_column ? 1 : 0;
  if (names.size() <= skip) throw IngestionError(source + ": header has no channels");
  names.erase(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(skip));
  const std::size_t n = names.size();

  std::vector<std::vector<double>> columns(n);
  std::size_t row = 1;  // 1-based file line of the header
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != n + skip) {
      throw IngestionError(source + ": row " + std::to_string(row) + " has " +
                           std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(n + skip));
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::optional<double> value;
      try {
        value = parse_number(fields[c + skip]);
      } catch (const std::invalid_argument&) {
        throw IngestionError(source + ": row " + std::to_string(row) + ", column " +
                             std::to_string(c + skip + 1) + ": cannot parse '" +
                             trim(fields[c + skip]) + "'");
      }
      if (!value) {
        if (options.missing == MissingPolicy::kError) {
          throw IngestionError(source + ": row " + std::to_string(row) + ", column " +
                               std::to_string(c + skip + 1) + ": missing value");
        }
        if (columns[c].empty()) {
          throw IngestionError(source + ": row " + std::to_string(row) + ", column " +
                               std::to_string(c + skip + 1) +
                               ": missing value with nothing to forward-fill");
        }
        value = columns[c].back();
      }
      columns[c].push_back(*value);
    }
  }
  const std::size_t t = columns[0].size();
  if (t == 0) throw IngestionError(source + ": no data rows");
  RealTensor values({n, t});
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < t; ++i) values[c * t + i] = columns[c][i];
  return {std::move(values), std::move(names)};
}

SeriesMatrix ingest_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  return parse_csv(in, options, path.string());
}

std::string to_csv(const SeriesMatrix& series) {
  std::string out;
  const std::size_t n = series.channels(), t = series.length();
  for (std::size_t c = 0; c < n; ++c) {
    if (c) out.push_back(',');
    out += c < series.names.size() ? series.names[c] : "ch" + std::to_string(c);
  }
  out.push_back('\n');
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      if (c) out.push_back(',');
      format_double(out, series.values[c * t + i]);
    }
    out.push_back('\n');
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

void write_csv(const SeriesMatrix& series, const std::filesystem::path& path) {
  write_file_atomic(path, to_csv(series));
}

void SplitSpec::validate() const {
  if (!(train > 0.0) || !(val > 0.0) || !(test > 0.0)) {
    throw ConfigError("split ratios must all be > 0");
  }
  if (std::abs(train + val + test - 1.0) > 1e-6) {
    throw ConfigError("split ratios must sum to 1");
  }
}

SeriesSplit chronological_split(const SeriesMatrix& series, const SplitSpec& spec,
                                std::size_t min_length) {
  spec.validate();
  const std::size_t t = series.length();
  // The small offset keeps e.g. (0.7 + 0.2) * 100 from flooring to 89.
  auto boundary = [t](double fraction) {
    const double raw = std::floor(fraction * static_cast<double>(t) + 1e-9);
    return std::min(t, static_cast<std::size_t>(std::max(0.0, raw)));
  };
  const std::size_t b1 = boundary(spec.train);
  const std::size_t b2 = boundary(spec.train + spec.val);
  const std::size_t lengths[3] = {b1, b2 - b1, t - b2};
  const char* names[3] = {"train", "val", "test"};
  for (int i = 0; i < 3; ++i) {
    if (lengths[i] < std::max<std::size_t>(min_length, 1)) {
      throw ConfigError(std::string(names[i]) + " segment has " +
                        std::to_string(lengths[i]) +
                        " timestamps, needs at least " + std::to_string(min_length));
    }
  }
  return {series.slice(0, b1), series.slice(b1, b2), series.slice(b2, t)};
}

WindowedDataset::WindowedDataset(SeriesMatrix segment, std::size_t lookback,
                                 std::size_t horizon)
    : source_(std::make_shared<const SeriesMatrix>(std::move(segment))),
      lookback_(lookback),
      horizon_(horizon) {
  if (lookback == 0 || horizon == 0) {
    throw ConfigError("lookback and horizon must be >= 1");
  }
  const std::size_t t = source_->length();
  if (t < lookback + horizon) {
    throw ConfigError("segment of length " + std::to_string(t) +
                      " is shorter than lookback + horizon = " +
                      std::to_string(lookback + horizon));
  }
  count_ = t - lookback - horizon + 1;
}

RealTensor WindowedDataset::input(std::size_t i) const {
  return source_->slice(i, i + lookback_).values;
}

RealTensor WindowedDataset::target(std::size_t i) const {
  return source_->slice(i + lookback_, i + lookback_ + horizon_).values;
}

void WindowedDataset::gather(std::span<const std::size_t> samples, RealTensor& inputs,
                             RealTensor& targets) const {
  const std::size_t b = samples.size(), n = channels(), t = source_->length();
  inputs = RealTensor({b, n, lookback_});
  targets = RealTensor({b, n, horizon_});
  const double* src = source_->values.data();
  for (std::size_t s = 0; s < b; ++s) {
    const std::size_t start = samples[s];
    if (start >= count_) throw DimensionError("window index out of range");
    for (std::size_t c = 0; c < n; ++c) {
      const double* row = src + c * t + start;
      std::copy(row, row + lookback_, inputs.data() + (s * n + c) * lookback_);
      std::copy(row + lookback_, row + lookback_ + horizon_,
                targets.data() + (s * n + c) * horizon_);
    }
  }
}

WindowedDataset make_windows(const SeriesMatrix& segment, std::size_t lookback,
                             std::size_t horizon) {
  return WindowedDataset(segment, lookback, horizon);
}

SeriesMatrix synth_sinusoids(const SynthSpec& spec) {
  if (spec.channels == 0 || spec.length == 0) {
    throw ConfigError("synth: channels and length must be >= 1");
  }
  if (!(spec.noise_std >= 0.0) || !std::isfinite(spec.noise_std)) {
    throw ConfigError("synth: noise_std must be finite and >= 0");
  }
  const std::size_t n = spec.channels, t = spec.length;
  const double base = static_cast<double>(spec.period_base ? spec.period_base : t);
  RealTensor values({n, t});
  for (const auto& c : spec.components) {
    if (c.channel >= n) {
      throw ConfigError("synth: component channel " + std::to_string(c.channel) +
                        " out of range");
    }
    if (!std::isfinite(c.cycles) || !std::isfinite(c.amplitude) ||
        !std::isfinite(c.phase)) {
      throw ConfigError("synth: component parameters must be finite");
    }
    for (std::size_t i = 0; i < t; ++i) {
      const double angle =
          2.0 * std::numbers::pi * c.cycles * static_cast<double>(i) / base + c.phase;
      values[c.channel * t + i] += c.amplitude * std::sin(angle);
    }
  }
  if (spec.noise_std > 0.0) {
    for (std::size_t ch = 0; ch < n; ++ch) {
      std::mt19937_64 rng(derive_seed(spec.seed, ch));
      std::normal_distribution<double> noise(0.0, spec.noise_std);
      for (std::size_t i = 0; i < t; ++i) values[ch * t + i] += noise(rng);
    }
  }
  std::vector<std::string> names;
  for (std::size_t ch = 0; ch < n; ++ch) names.push_back("ch" + std::to_string(ch));
  return {std::move(values), std::move(names)};
}

}  // namespace frets
