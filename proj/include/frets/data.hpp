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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "frets/tensor.hpp"

namespace frets {

/// Multivariate series, channels x timestamps.
struct SeriesMatrix {
  RealTensor values;               // [N x T]
  std::vector<std::string> names;  // N labels

  std::size_t channels() const { return values.dim(0); }
  std::size_t length() const { return values.dim(1); }

  /// Columns [begin, end) as a new series.
  SeriesMatrix slice(std::size_t begin, std::size_t end) const;
};

enum class MissingPolicy { kError, kForwardFill };

struct CsvOptions {
  MissingPolicy missing = MissingPolicy::kError;
  /// Ignore the first column (e.g. a date string).
  bool timestamp_column = false;
};

/// Header row of channel names, then one comma-separated row per timestamp.
SeriesMatrix parse_csv(std::istream& in, const CsvOptions& options,
                       const std::string& source = "<stream>");
SeriesMatrix ingest_csv(const std::filesystem::path& path,
                        const CsvOptions& options = {});

/// Shortest round-trip decimal formatting of every value.
std::string to_csv(const SeriesMatrix& series);
void write_csv(const SeriesMatrix& series, const std::filesystem::path& path);

/// Writes `contents` to `path` through a temporary file and a rename, so
/// readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

struct SplitSpec {
  double train = 0.7;
  double val = 0.2;
  double test = 0.1;

  void validate() const;
};

struct SeriesSplit {
  SeriesMatrix train;
  SeriesMatrix val;
  SeriesMatrix test;
};

/// Contiguous segments with boundaries floor(train*T) and
/// floor((train+val)*T). Every segment must hold at least `min_length`
/// timestamps.
SeriesSplit chronological_split(const SeriesMatrix& series, const SplitSpec& spec,
                                std::size_t min_length);

/// Stride-1 (lookback, horizon) windows over one segment.
class WindowedDataset {
 public:
  WindowedDataset(SeriesMatrix segment, std::size_t lookback, std::size_t horizon);

  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::size_t lookback() const { return lookback_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t channels() const { return source_->channels(); }
  const SeriesMatrix& source() const { return *source_; }

  /// Input [N x L] of sample i (columns [i, i+L)).
  RealTensor input(std::size_t i) const;
  /// Target [N x tau] of sample i (columns [i+L, i+L+tau)).
  RealTensor target(std::size_t i) const;

  /// Stacks the selected samples into [B x N x L] inputs and [B x N x tau]
  /// targets.
  void gather(std::span<const std::size_t> samples, RealTensor& inputs,
              RealTensor& targets) const;

 private:
  std::shared_ptr<const SeriesMatrix> source_;
  std::size_t lookback_;
  std::size_t horizon_;
  std::size_t count_;
};

WindowedDataset make_windows(const SeriesMatrix& segment, std::size_t lookback,
                             std::size_t horizon);

struct SinusoidComponent {
  std::size_t channel = 0;
  double cycles = 1.0;  // cycles per `period_base` timestamps
  double amplitude = 1.0;
  double phase = 0.0;   // radians
};

struct SynthSpec {
  std::size_t channels = 1;
  std::size_t length = 1;
  /// Timestamps over which `cycles` is counted; 0 means `length`.
  std::size_t period_base = 0;
  std::vector<SinusoidComponent> components;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

/// x[c, t] = sum over components on c of a*sin(2*pi*cycles*t/period_base + phase)
/// plus i.i.d. N(0, noise_std^2) noise.
SeriesMatrix synth_sinusoids(const SynthSpec& spec);

}  // namespace frets
