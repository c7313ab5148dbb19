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

#include "frets/model.hpp"

#include <cmath>

#include "frets/errors.hpp"
#include "frets/fft.hpp"
#include "frets/random.hpp"

namespace frets {
namespace {

// Seed streams per block; fixed so ablations share the surviving blocks.
enum Stream : std::uint64_t {
  kEmbedding = 1,
  kProjW1 = 2,
  kProjW2 = 3,
  kChannelBase = 100,
  kTemporalBase = 200,
};

void require_rank_at_least(const RealTensor& t, std::size_t rank, const char* op) {
  if (t.rank() < rank) {
    throw DimensionError(std::string(op) + ": need rank >= " +
                         std::to_string(rank) + ", got " +
                         shape_to_string(t.shape()));
  }
}

DenseParams dense_init(std::size_t d, std::uint64_t seed) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(d));
  return {uniform_tensor({d, d}, bound, derive_seed(seed, 0)), RealTensor({d})};
}

void gate_inplace(RealTensor& grad, const RealTensor& pre, Activation activation) {
  if (activation == Activation::kRelu)
    for (std::size_t i = 0; i < grad.size(); ++i)
      if (!(pre[i] > 0.0)) grad[i] = 0.0;
}

void activate_inplace(RealTensor& t, Activation activation) {
  if (activation == Activation::kRelu)
    for (auto& v : t.values()) v = v > 0.0 ? v : 0.0;
}

// Spectral learner along `axis`: rfft, FreMLP stack on the last axis, irfft.
// Keeps the input spectrum in `spectrum` for the backward pass.
RealTensor spectral_learner(const RealTensor& x, std::size_t axis,
                            std::span<const FreMLPParams> layers,
                            Activation activation, ComplexTensor& spectrum) {
  const std::size_t n = x.dim(axis);
  spectrum = rfft(x, axis);
  ComplexTensor mixed = fremlp_stack_forward(spectrum, layers, activation);
  return irfft(mixed, n, axis);
}

RealTensor spectral_learner(const RealTensor& x, std::size_t axis,
                            std::span<const FreMLPParams> layers,
                            Activation activation) {
  ComplexTensor spectrum;
  return spectral_learner(x, axis, layers, activation, spectrum);
}

// Backward of spectral_learner given the input spectrum it kept; writes
// parameter grads into `grads`.
RealTensor spectral_learner_backward(const ComplexTensor& spectrum, std::size_t n,
                                     std::size_t axis,
                                     std::span<const FreMLPParams> layers,
                                     Activation activation, const RealTensor& upstream,
                                     std::vector<FreMLPParams>& grads) {
  const ComplexTensor mixed_grad = irfft_adjoint(upstream, axis);
  FreMLPStackGrads g = fremlp_stack_backward(spectrum, layers, mixed_grad, activation);
  grads.clear();
  for (auto& layer : g.layers) {
    grads.push_back({std::move(layer.w_re), std::move(layer.w_im),
                     std::move(layer.b_re), std::move(layer.b_im)});
  }
  return rfft_adjoint(g.input, n, axis);
}

// Backward of dense_stack_forward.
RealTensor dense_stack_backward(const RealTensor& x, std::span<const DenseParams> layers,
                                Activation activation, const RealTensor& upstream,
                                std::vector<DenseParams>& grads) {
  std::vector<RealTensor> inputs{as_rows(x)};
  std::vector<RealTensor> pres;
  for (const auto& layer : layers) {
    RealTensor pre = add_row_vector(matmul(inputs.back(), layer.weight), layer.bias);
    RealTensor out = pre;
    activate_inplace(out, activation);
    pres.push_back(std::move(pre));
    inputs.push_back(std::move(out));
  }
  grads.assign(layers.size(), {});
  RealTensor g = as_rows(upstream);
  for (std::size_t i = layers.size(); i-- > 0;) {
    gate_inplace(g, pres[i], activation);
    grads[i].weight = matmul_tn(inputs[i], g);
    grads[i].bias = column_sums(g);
    g = matmul_nt(g, layers[i].weight);
  }
  return std::move(g).reshaped(x.shape());
}

// Intermediate values kept by the forward pass for backward.
struct Trace {
  RealTensor extended;     // H
  ComplexTensor channel_spectrum;   // rfft of H along channels
  RealTensor after_channel;  // Z
  ComplexTensor temporal_spectrum;  // rfft of Z along time
  RealTensor after_temporal;  // S
  RealTensor flat;         // S as [B*N x L*d]
  RealTensor hidden_pre;   // [B*N x d_h]
  RealTensor hidden;
  RealTensor output;       // [B, N, tau]
};

void check_input(const RealTensor& x, const ModelConfig& config) {
  if (x.rank() != 3 || x.dim(1) != config.channels || x.dim(2) != config.lookback) {
    throw ConfigError("frets_forward: input " + shape_to_string(x.shape()) +
                      " does not match [B x " + std::to_string(config.channels) +
                      " x " + std::to_string(config.lookback) + "]");
  }
}

Trace forward_trace(const RealTensor& x, const FreTSParams& params,
                    const ModelConfig& config) {
  config.validate();
  check_params(params, config);
  check_input(x, config);
  Trace t;
  t.extended = dimension_extension(x, params.embedding);
  const bool freq = config.domain == LearnerDomain::kFrequency;
  if (config.channel_learner_active()) {
    t.after_channel =
        freq ? spectral_learner(t.extended, 1, params.channel, config.learner_activation,
                                t.channel_spectrum)
             : dense_stack_forward(t.extended, params.channel_time,
                                   config.learner_activation);
  } else {
    t.after_channel = t.extended;
  }
  if (config.temporal_learner_active()) {
    t.after_temporal =
        freq ? spectral_learner(t.after_channel, 2, params.temporal,
                                config.learner_activation, t.temporal_spectrum)
             : dense_stack_forward(t.after_channel, params.temporal_time,
                                   config.learner_activation);
  } else {
    t.after_temporal = t.after_channel;
  }
  const std::size_t batch = x.dim(0);
  const std::size_t rows = batch * config.channels;
  t.flat = t.after_temporal.reshaped({rows, config.lookback * config.embed_dim});
  t.hidden_pre = add_row_vector(matmul(t.flat, params.proj_w1), params.proj_b1);
  t.hidden = t.hidden_pre;
  activate_inplace(t.hidden, config.projection_activation);
  t.output = add_row_vector(matmul(t.hidden, params.proj_w2), params.proj_b2)
                 .reshaped({batch, config.channels, config.horizon});
  return t;
}

}  // namespace

void ModelConfig::validate() const {
  if (lookback == 0 || horizon == 0 || channels == 0 || embed_dim == 0 ||
      hidden_dim == 0 || fremlp_layers == 0) {
    throw ConfigError(
        "model config: lookback, horizon, channels, embed_dim, hidden_dim and "
        "fremlp_layers must all be >= 1");
  }
  if (!channel_learner_active() && !temporal_learner_active()) {
    throw ConfigError("model config: at least one learner must be enabled");
  }
}

FreTSParams init_params(const ModelConfig& config) {
  config.validate();
  const std::size_t d = config.embed_dim;
  FreTSParams p;
  p.embedding = uniform_tensor({d}, 1.0 / std::sqrt(static_cast<double>(d)),
                               derive_seed(config.seed, kEmbedding));
  const bool freq = config.domain == LearnerDomain::kFrequency;
  for (std::size_t i = 0; i < config.fremlp_layers; ++i) {
    const auto cseed = derive_seed(config.seed, kChannelBase + i);
    const auto tseed = derive_seed(config.seed, kTemporalBase + i);
    if (config.channel_learner_active()) {
      if (freq) p.channel.push_back(fremlp_init(d, cseed));
      else p.channel_time.push_back(dense_init(d, cseed));
    }
    if (config.temporal_learner_active()) {
      if (freq) p.temporal.push_back(fremlp_init(d, tseed));
      else p.temporal_time.push_back(dense_init(d, tseed));
    }
  }
  const std::size_t flat = config.lookback * d;
  p.proj_w1 = uniform_tensor({flat, config.hidden_dim},
                             1.0 / std::sqrt(static_cast<double>(flat)),
                             derive_seed(config.seed, kProjW1));
  p.proj_b1 = RealTensor({config.hidden_dim});
  p.proj_w2 = uniform_tensor({config.hidden_dim, config.horizon},
                             1.0 / std::sqrt(static_cast<double>(config.hidden_dim)),
                             derive_seed(config.seed, kProjW2));
  p.proj_b2 = RealTensor({config.horizon});
  return p;
}

FreTSParams zeros_like(const FreTSParams& like) {
  FreTSParams z = like;
  for_each_block(z, [](const std::string&, RealTensor& t) {
    for (auto& v : t.values()) v = 0.0;
  });
  return z;
}

void check_params(const FreTSParams& params, const ModelConfig& config) {
  const std::size_t d = config.embed_dim;
  auto expect = [](const RealTensor& t, const Shape& shape, const std::string& name) {
    if (t.shape() != shape) {
      throw ConfigError("parameter " + name + " has shape " +
                        shape_to_string(t.shape()) + ", config expects " +
                        shape_to_string(shape));
    }
  };
  expect(params.embedding, {d}, "embedding");
  const bool freq = config.domain == LearnerDomain::kFrequency;
  const std::size_t layers = config.fremlp_layers;
  auto expect_count = [&](std::size_t have, bool active, bool domain_match,
                          const char* name) {
    const std::size_t want = active && domain_match ? layers : 0;
    if (have != want) {
      throw ConfigError(std::string("parameter set has ") + std::to_string(have) +
                        " " + name + " layers, config expects " +
                        std::to_string(want));
    }
  };
  expect_count(params.channel.size(), config.channel_learner_active(), freq, "channel");
  expect_count(params.channel_time.size(), config.channel_learner_active(), !freq,
               "channel_time");
  expect_count(params.temporal.size(), config.temporal_learner_active(), freq,
               "temporal");
  expect_count(params.temporal_time.size(), config.temporal_learner_active(), !freq,
               "temporal_time");
  for (const auto* group : {&params.channel, &params.temporal}) {
    for (const auto& layer : *group) {
      layer.validate();
      if (layer.dim() != d) throw ConfigError("FreMLP layer d does not match embed_dim");
    }
  }
  for (const auto* group : {&params.channel_time, &params.temporal_time}) {
    for (const auto& layer : *group) {
      expect(layer.weight, {d, d}, "dense weight");
      expect(layer.bias, {d}, "dense bias");
    }
  }
  expect(params.proj_w1, {config.lookback * d, config.hidden_dim}, "projection.w1");
  expect(params.proj_b1, {config.hidden_dim}, "projection.b1");
  expect(params.proj_w2, {config.hidden_dim, config.horizon}, "projection.w2");
  expect(params.proj_b2, {config.horizon}, "projection.b2");
}

std::size_t parameter_count(const FreTSParams& params) {
  std::size_t n = 0;
  for_each_block(params, [&](const std::string&, const RealTensor& t) { n += t.size(); });
  return n;
}

RealTensor dimension_extension(const RealTensor& x, const RealTensor& embedding) {
  if (embedding.rank() != 1) {
    throw DimensionError("dimension_extension: embedding must be a vector, got " +
                         shape_to_string(embedding.shape()));
  }
  const std::size_t d = embedding.size();
  Shape shape = x.shape();
  shape.push_back(d);
  RealTensor out(shape);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    double* dst = out.data() + i * d;
    for (std::size_t k = 0; k < d; ++k) dst[k] = v * embedding[k];
  }
  return out;
}

RealTensor channel_learner(const RealTensor& h, std::span<const FreMLPParams> layers,
                           Activation activation) {
  require_rank_at_least(h, 3, "channel_learner");
  return spectral_learner(h, h.rank() - 3, layers, activation);
}

RealTensor temporal_learner(const RealTensor& z, std::span<const FreMLPParams> layers,
                            Activation activation) {
  require_rank_at_least(z, 3, "temporal_learner");
  return spectral_learner(z, z.rank() - 2, layers, activation);
}

RealTensor dense_stack_forward(const RealTensor& x, std::span<const DenseParams> layers,
                               Activation activation) {
  if (layers.empty()) throw ConfigError("dense stack needs at least one layer");
  RealTensor rows = as_rows(x);
  for (const auto& layer : layers) {
    rows = add_row_vector(matmul(rows, layer.weight), layer.bias);
    activate_inplace(rows, activation);
  }
  return std::move(rows).reshaped(x.shape());
}

RealTensor projection(const RealTensor& s, const RealTensor& w1, const RealTensor& b1,
                      const RealTensor& w2, const RealTensor& b2,
                      Activation activation) {
  require_rank_at_least(s, 3, "projection");
  const std::size_t lookback = s.dim(s.rank() - 2);
  const std::size_t d = s.dim(s.rank() - 1);
  const std::size_t rows = s.size() / (lookback * d);
  RealTensor hidden = add_row_vector(matmul(s.reshaped({rows, lookback * d}), w1), b1);
  activate_inplace(hidden, activation);
  RealTensor out = add_row_vector(matmul(hidden, w2), b2);
  Shape shape(s.shape().begin(), s.shape().end() - 2);
  shape.push_back(w2.dim(1));
  return std::move(out).reshaped(shape);
}

RealTensor frets_forward(const RealTensor& x, const FreTSParams& params,
                         const ModelConfig& config) {
  return forward_trace(x, params, config).output;
}

namespace {

FreTSParams backward_from_trace(const RealTensor& x, const Trace& t,
                                const RealTensor& output_grad,
                                const FreTSParams& params, const ModelConfig& config) {
  if (output_grad.shape() != t.output.shape()) {
    throw DimensionError("frets_backward: output gradient " +
                         shape_to_string(output_grad.shape()) +
                         " does not match predictions " +
                         shape_to_string(t.output.shape()));
  }
  FreTSParams g;
  const std::size_t rows = t.hidden.dim(0);

  // Projection.
  const RealTensor g_out = output_grad.reshaped({rows, config.horizon});
  g.proj_w2 = matmul_tn(t.hidden, g_out);
  g.proj_b2 = column_sums(g_out);
  RealTensor g_hidden = matmul_nt(g_out, params.proj_w2);
  gate_inplace(g_hidden, t.hidden_pre, config.projection_activation);
  g.proj_w1 = matmul_tn(t.flat, g_hidden);
  g.proj_b1 = column_sums(g_hidden);
  RealTensor g_s = matmul_nt(g_hidden, params.proj_w1).reshaped(t.after_temporal.shape());

  // Learners, last to first.
  const bool freq = config.domain == LearnerDomain::kFrequency;
  const std::size_t time_axis = 2, channel_axis = 1;
  RealTensor g_z = std::move(g_s);
  if (config.temporal_learner_active()) {
    g_z = freq ? spectral_learner_backward(t.temporal_spectrum, config.lookback, time_axis,
                                           params.temporal, config.learner_activation, g_z,
                                           g.temporal)
               : dense_stack_backward(t.after_channel, params.temporal_time,
                                      config.learner_activation, g_z, g.temporal_time);
  }
  RealTensor g_h = std::move(g_z);
  if (config.channel_learner_active()) {
    g_h = freq ? spectral_learner_backward(t.channel_spectrum, config.channels,
                                           channel_axis, params.channel,
                                           config.learner_activation, g_h, g.channel)
               : dense_stack_backward(t.extended, params.channel_time,
                                      config.learner_activation, g_h, g.channel_time);
  }

  // Dimension extension: d embedding[k] = sum_i x[i] * g_h[i, k].
  const std::size_t d = config.embed_dim;
  g.embedding = matmul_tn(x.reshaped({x.size(), 1}), g_h.reshaped({x.size(), d}))
                    .reshaped({d});
  return g;
}

}  // namespace

FreTSParams frets_backward_from_output(const RealTensor& x,
                                       const RealTensor& output_grad,
                                       const FreTSParams& params,
                                       const ModelConfig& config) {
  return backward_from_trace(x, forward_trace(x, params, config), output_grad, params,
                             config);
}

LossAndGrads frets_backward(const RealTensor& x, const RealTensor& targets,
                            const FreTSParams& params, const ModelConfig& config) {
  const Trace trace = forward_trace(x, params, config);
  const RealTensor& pred = trace.output;
  if (targets.shape() != pred.shape()) {
    throw DimensionError("frets_backward: targets " + shape_to_string(targets.shape()) +
                         " do not match predictions " + shape_to_string(pred.shape()));
  }
  const double count = static_cast<double>(pred.size());
  RealTensor output_grad(pred.shape());
  double loss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = pred[i] - targets[i];
    loss += diff * diff;
    output_grad[i] = 2.0 * diff / count;
  }
  return {loss / count, backward_from_trace(x, trace, output_grad, params, config)};
}

}  // namespace frets
