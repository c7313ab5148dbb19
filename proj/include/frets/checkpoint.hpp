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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "frets/data.hpp"
#include "frets/model.hpp"
#include "frets/training.hpp"

namespace frets {

struct TrainingSummary {
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
  Metrics best_val;
};

/// Everything needed to reproduce predictions: config, normalisation
/// statistics, and every parameter tensor.
struct Checkpoint {
  ModelConfig model;
  SplitSpec split;
  CsvOptions csv;
  std::vector<std::string> channel_names;
  MinMaxScaler scaler;
  FreTSParams params;
  TrainingSummary summary;
};

inline constexpr int kCheckpointVersion = 1;

/// Layout:
///   line 1  "FRETS-CHECKPOINT"
///   line 2  single-line JSON header: format_version, model, split, csv,
///           channel_names, summary, and `tensors` = [{name, shape}] in
///           payload order (scaler.min, scaler.max, then for_each_block order)
///   line 3  "DATA <payload bytes>"
///   payload raw little-endian IEEE-754 doubles, row-major, no padding
std::string serialize_checkpoint(const Checkpoint& checkpoint);
Checkpoint parse_checkpoint(std::string_view bytes);

/// Raw-scale forecast [N x tau] from a raw-scale window [N x L], using the
/// stored scaler around frets_forward.
RealTensor forecast(const Checkpoint& checkpoint, const RealTensor& window);

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace frets
