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
#include <functional>
#include <string>
#include <vector>

#include "frets/data.hpp"
#include "frets/model.hpp"
#include "frets/tensor.hpp"

namespace frets {

double mse_loss(const RealTensor& pred, const RealTensor& target);

struct Metrics {
  double mae = 0.0;
  double rmse = 0.0;
};

Metrics mae_rmse(const RealTensor& pred, const RealTensor& target);

/// Per-channel min-max normalisation. A channel whose training range is
/// empty (max == min) maps to 0 and inverts to its constant value.
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  MinMaxScaler(std::vector<double> min, std::vector<double> max);

  static MinMaxScaler fit(const SeriesMatrix& train);

  /// Tensors have channels on axis rank-2, e.g. [N x T] or [B x N x T].
  RealTensor apply(const RealTensor& x) const;
  RealTensor invert(const RealTensor& x) const;
  SeriesMatrix apply(const SeriesMatrix& s) const;
  SeriesMatrix invert(const SeriesMatrix& s) const;

  std::size_t channels() const { return min_.size(); }
  const std::vector<double>& min() const { return min_; }
  const std::vector<double>& max() const { return max_; }
  bool degenerate(std::size_t channel) const { return !(max_[channel] > min_[channel]); }

 private:
  template <class F>
  RealTensor map(const RealTensor& x, F f) const;

  std::vector<double> min_;
  std::vector<double> max_;
};

struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t step = 0;
  FreTSParams m;
  FreTSParams v;

  static AdamState for_params(const FreTSParams& params, double lr);
};

/// One bias-corrected Adam update. Throws TrainingError naming the block
/// when a gradient is not finite; parameters are left untouched then.
void adam_step(FreTSParams& params, const FreTSParams& grads, AdamState& state);

struct TrainConfig {
  double lr = 1e-3;
  std::size_t batch_size = 32;
  std::size_t epochs = 100;
  /// Stop after this many epochs without a better validation MAE; 0 disables.
  std::size_t patience = 10;
  std::uint64_t seed = 0;
  std::size_t eval_batch_size = 256;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  Metrics val;
  double wall_seconds = 0.0;
};

struct TrainResult {
  FreTSParams params;  // best validation MAE (initial parameters for 0 epochs)
  std::vector<EpochRecord> log;
  std::size_t best_epoch = 0;  // 0 when no epoch ran
  Metrics best_val;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Minibatch Adam on MSE with a seeded shuffle per epoch, keeping the
/// parameters with the lowest validation MAE.
TrainResult train(const ModelConfig& model, const WindowedDataset& train_set,
                  const WindowedDataset& val_set, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

/// Same as above, starting from the given parameters.
TrainResult train_from(FreTSParams initial, const ModelConfig& model,
                       const WindowedDataset& train_set, const WindowedDataset& val_set,
                       const TrainConfig& config, const EpochCallback& on_epoch = {});

/// MAE/RMSE over every window of `data`, accumulated in sample order.
Metrics evaluate(const FreTSParams& params, const ModelConfig& model,
                 const WindowedDataset& data, std::size_t batch_size = 256);

/// Tab-separated epoch log without wall time (byte-stable across runs).
std::string format_epoch_log(const std::vector<EpochRecord>& log);

}  // namespace frets
