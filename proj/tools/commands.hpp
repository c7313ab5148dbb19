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
#include <optional>
#include <string>

namespace frets::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnexpected = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitShape = 4;
inline constexpr int kExitProperty = 5;
inline constexpr int kExitNumeric = 6;

inline constexpr const char* kCheckpointFile = "checkpoint.frets";
inline constexpr const char* kEpochLogFile = "epoch_log.tsv";
inline constexpr const char* kForecastFile = "forecast.csv";
inline constexpr const char* kBandSummaryFile = "band_summary.json";

struct TrainOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

struct EvaluateOptions {
  std::filesystem::path checkpoint;
  std::string split = "test";
  /// Dataset CSV; falls back to the dataset named in `config`.
  std::optional<std::filesystem::path> data;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
};

struct PredictOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path input;
  std::filesystem::path out = ".";
};

struct CheckOptions {
  std::uint64_t seed = 0;
  /// Fault-injection builds only: disable the conjugate-bin weighting in the
  /// transform adjoints before running the suites.
  bool skip_adjoint_scaling = false;
};

struct InspectOptions {
  std::filesystem::path checkpoint;
  std::string which = "temporal";
  std::size_t layer = 0;
  std::filesystem::path out = ".";
};

struct SynthOptions {
  std::filesystem::path spec;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = ".";
};

int cmd_train(const TrainOptions& options, std::ostream& log);
int cmd_evaluate(const EvaluateOptions& options, std::ostream& log);
int cmd_predict(const PredictOptions& options, std::ostream& log);
int cmd_check(const CheckOptions& options, std::ostream& log);
int cmd_inspect_weights(const InspectOptions& options, std::ostream& log);
int cmd_synth(const SynthOptions& options, std::ostream& log);

/// Exit status for an exception escaping a command.
int exit_code_for(const std::exception& e);

}  // namespace frets::cli
