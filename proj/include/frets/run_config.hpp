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

#include "frets/data.hpp"
#include "frets/model.hpp"
#include "frets/training.hpp"

namespace frets {

/// Flat JSON object. Recognised keys:
///   dataset (required, relative paths resolve against the config's directory),
///   timestamp_column, missing_policy ("error" | "forward_fill"),
///   split ([train, val, test]),
///   lookback, horizon (required), embed_dim, hidden_dim, fremlp_layers,
///   use_channel_learner, use_temporal_learner, channel_independent,
///   learner_domain ("frequency" | "time"), learner_activation,
///   projection_activation ("relu" | "identity"),
///   lr, batch_size, epochs, patience, eval_batch_size, seed, output_dir.
/// Unknown keys are rejected. `model.channels` is filled in from the data.
struct RunConfig {
  std::filesystem::path dataset;
  CsvOptions csv;
  SplitSpec split;
  ModelConfig model;
  TrainConfig train;
  std::filesystem::path output_dir = "out";
};

RunConfig parse_run_config(std::string_view json_text,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Flat JSON object: channels, length, period_base, noise_std, seed,
/// components ([{channel, cycles, amplitude, phase}]), file (output name,
/// default "synth.csv").
struct SynthFileSpec {
  SynthSpec spec;
  std::string file = "synth.csv";
};

SynthFileSpec parse_synth_spec(std::string_view json_text);
SynthFileSpec load_synth_spec(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

const char* to_string(Activation a);
const char* to_string(LearnerDomain d);
const char* to_string(MissingPolicy p);

}  // namespace frets
