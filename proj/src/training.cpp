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

#include "frets/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "frets/errors.hpp"
#include "frets/random.hpp"

namespace frets {
namespace {

void require_same_shape(const RealTensor& a, const RealTensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         shape_to_string(a.shape()) + " vs " +
                         shape_to_string(b.shape()));
  }
}

std::vector<std::pair<std::string, RealTensor*>> blocks_of(FreTSParams& p) {
  std::vector<std::pair<std::string, RealTensor*>> out;
  for_each_block(p, [&](const std::string& name, RealTensor& t) {
    out.emplace_back(name, &t);
  });
  return out;
}

std::vector<const RealTensor*> const_blocks_of(const FreTSParams& p) {
  std::vector<const RealTensor*> out;
  for_each_block(p, [&](const std::string&, const RealTensor& t) { out.push_back(&t); });
  return out;
}

// Running sums for MAE / RMSE in a fixed accumulation order.
struct ErrorSums {
  double abs = 0.0;
  double sq = 0.0;
  std::size_t count = 0;

  void add(const RealTensor& pred, const RealTensor& target) {
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double diff = pred[i] - target[i];
      abs += std::abs(diff);
      sq += diff * diff;
    }
    count += pred.size();
  }

  Metrics metrics() const {
    const double n = static_cast<double>(count);
    return {abs / n, std::sqrt(sq / n)};
  }
};

}  // namespace

double mse_loss(const RealTensor& pred, const RealTensor& target) {
  require_same_shape(pred, target, "mse_loss");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = pred[i] - target[i];
    sum += diff * diff;
  }
  return sum / static_cast<double>(pred.size());
}

Metrics mae_rmse(const RealTensor& pred, const RealTensor& target) {
  require_same_shape(pred, target, "mae_rmse");
  ErrorSums sums;
  sums.add(pred, target);
  return sums.metrics();
}

MinMaxScaler::MinMaxScaler(std::vector<double> min, std::vector<double> max)
    : min_(std::move(min)), max_(std::move(max)) {
  if (min_.size() != max_.size()) {
    throw DimensionError("scaler min/max channel counts differ");
  }
  for (std::size_t c = 0; c < min_.size(); ++c) {
    if (!(max_[c] >= min_[c])) {
      throw ConfigError("scaler channel " + std::to_string(c) + " has max < min");
    }
  }
}

MinMaxScaler MinMaxScaler::fit(const SeriesMatrix& train) {
  const std::size_t n = train.channels(), t = train.length();
  std::vector<double> lo(n), hi(n);
  for (std::size_t c = 0; c < n; ++c) {
    const double* row = train.values.data() + c * t;
    const auto [mn, mx] = std::minmax_element(row, row + t);
    lo[c] = *mn;
    hi[c] = *mx;
  }
  return MinMaxScaler(std::move(lo), std::move(hi));
}

template <class F>
RealTensor MinMaxScaler::map(const RealTensor& x, F f) const {
  if (x.rank() < 2 || x.dim(x.rank() - 2) != channels()) {
    throw DimensionError("scaler fitted on " + std::to_string(channels()) +
                         " channels cannot map " + shape_to_string(x.shape()));
  }
  const std::size_t n = channels(), t = x.shape().back();
  RealTensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t c = (i / t) % n;
    out[i] = f(out[i], c);
  }
  return out;
}

RealTensor MinMaxScaler::apply(const RealTensor& x) const {
  return map(x, [this](double v, std::size_t c) {
    return degenerate(c) ? 0.0 : (v - min_[c]) / (max_[c] - min_[c]);
  });
}

RealTensor MinMaxScaler::invert(const RealTensor& x) const {
  return map(x, [this](double v, std::size_t c) {
    return degenerate(c) ? min_[c] : v * (max_[c] - min_[c]) + min_[c];
  });
}

SeriesMatrix MinMaxScaler::apply(const SeriesMatrix& s) const {
  return {apply(s.values), s.names};
}

SeriesMatrix MinMaxScaler::invert(const SeriesMatrix& s) const {
  return {invert(s.values), s.names};
}

AdamState AdamState::for_params(const FreTSParams& params, double lr) {
  AdamState s;
  s.lr = lr;
  s.m = zeros_like(params);
  s.v = zeros_like(params);
  return s;
}

void adam_step(FreTSParams& params, const FreTSParams& grads, AdamState& state) {
  auto p = blocks_of(params);
  const auto g = const_blocks_of(grads);
  auto m = blocks_of(state.m);
  auto v = blocks_of(state.v);
  if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
    throw DimensionError("adam_step: parameter, gradient and moment layouts differ");
  }
  for (std::size_t b = 0; b < p.size(); ++b) {
    if (g[b]->shape() != p[b].second->shape() ||
        m[b].second->shape() != p[b].second->shape() ||
        v[b].second->shape() != p[b].second->shape()) {
      throw DimensionError("adam_step: shape mismatch in block " + p[b].first);
    }
    if (!g[b]->all_finite()) {
      throw TrainingError("non-finite gradient in parameter block " + p[b].first);
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t b = 0; b < p.size(); ++b) {
    RealTensor& param = *p[b].second;
    RealTensor& m1 = *m[b].second;
    RealTensor& m2 = *v[b].second;
    const RealTensor& grad = *g[b];
    for (std::size_t i = 0; i < param.size(); ++i) {
      m1[i] = state.beta1 * m1[i] + (1.0 - state.beta1) * grad[i];
      m2[i] = state.beta2 * m2[i] + (1.0 - state.beta2) * grad[i] * grad[i];
      const double m_hat = m1[i] / c1;
      const double v_hat = m2[i] / c2;
      param[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
  }
}

void TrainConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be > 0");
  if (batch_size == 0) throw ConfigError("batch size must be >= 1");
  if (eval_batch_size == 0) throw ConfigError("evaluation batch size must be >= 1");
}

Metrics evaluate(const FreTSParams& params, const ModelConfig& model,
                 const WindowedDataset& data, std::size_t batch_size) {
  if (data.empty()) throw ConfigError("evaluate: split has no windows");
  if (batch_size == 0) throw ConfigError("evaluate: batch size must be >= 1");
  ErrorSums sums;
  std::vector<std::size_t> idx;
  RealTensor x, y;
  for (std::size_t start = 0; start < data.size(); start += batch_size) {
    const std::size_t end = std::min(data.size(), start + batch_size);
    idx.resize(end - start);
    std::iota(idx.begin(), idx.end(), start);
    data.gather(idx, x, y);
    sums.add(frets_forward(x, params, model), y);
  }
  return sums.metrics();
}

TrainResult train(const ModelConfig& model, const WindowedDataset& train_set,
                  const WindowedDataset& val_set, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  return train_from(init_params(model), model, train_set, val_set, config, on_epoch);
}

TrainResult train_from(FreTSParams initial, const ModelConfig& model,
                       const WindowedDataset& train_set, const WindowedDataset& val_set,
                       const TrainConfig& config, const EpochCallback& on_epoch) {
  model.validate();
  config.validate();
  check_params(initial, model);
  if (train_set.empty()) throw ConfigError("train: training split has no windows");
  if (val_set.empty()) throw ConfigError("train: validation split has no windows");
  if (train_set.channels() != model.channels || val_set.channels() != model.channels) {
    throw ConfigError("train: dataset has " + std::to_string(train_set.channels()) +
                      " channels, model expects " + std::to_string(model.channels));
  }

  TrainResult result;
  result.params = initial;
  FreTSParams params = std::move(initial);
  AdamState adam = AdamState::for_params(params, config.lr);
  double best_mae = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  std::vector<std::size_t> order(train_set.size());
  std::vector<std::size_t> batch;
  RealTensor x, y;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(derive_seed(config.seed, epoch));
    std::shuffle(order.begin(), order.end(), rng);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                   order.begin() + static_cast<std::ptrdiff_t>(end));
      train_set.gather(batch, x, y);
      LossAndGrads lg = frets_backward(x, y, params, model);
      if (!std::isfinite(lg.loss)) {
        throw TrainingError("training loss became non-finite in epoch " +
                            std::to_string(epoch));
      }
      adam_step(params, lg.grads, adam);
      loss_sum += lg.loss * static_cast<double>(batch.size());
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(order.size());
    rec.val = evaluate(params, model, val_set, config.eval_batch_size);
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.log.push_back(rec);
    if (on_epoch) on_epoch(rec);

    if (rec.val.mae < best_mae) {
      best_mae = rec.val.mae;
      result.params = params;
      result.best_epoch = epoch;
      result.best_val = rec.val;
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      break;
    }
  }
  return result;
}

std::string format_epoch_log(const std::vector<EpochRecord>& log) {
  std::ostringstream os;
  os.precision(17);
  os << "epoch\ttrain_loss\tval_mae\tval_rmse\n";
  for (const auto& r : log)
    os << r.epoch << '\t' << r.train_loss << '\t' << r.val.mae << '\t' << r.val.rmse
       << '\n';
  return os.str();
}

}  // namespace frets
