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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frets/fremlp.hpp"
#include "frets/tensor.hpp"

namespace frets {

/// Where the two learners operate. kTime replaces every FreMLP with a plain
/// real MLP on the same (embedding) axis and skips the domain conversion;
/// it exists as the time-domain reference model.
enum class LearnerDomain { kFrequency, kTime };

struct ModelConfig {
  std::size_t lookback = 96;
  std::size_t horizon = 96;
  std::size_t channels = 1;
  std::size_t embed_dim = 128;
  std::size_t hidden_dim = 256;
  std::size_t fremlp_layers = 1;
  bool use_channel_learner = true;
  bool use_temporal_learner = true;
  /// Long-horizon mode: temporal learner only.
  bool channel_independent = false;
  LearnerDomain domain = LearnerDomain::kFrequency;
  Activation learner_activation = Activation::kRelu;
  Activation projection_activation = Activation::kRelu;
  std::uint64_t seed = 0;

  bool channel_learner_active() const {
    return use_channel_learner && !channel_independent;
  }
  bool temporal_learner_active() const { return use_temporal_learner; }

  /// Throws ConfigError on any zero size or when no learner is active.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Real dense layer y = x W + b, used by the time-domain learners.
struct DenseParams {
  RealTensor weight;  // [in x out]
  RealTensor bias;    // [out]

  friend bool operator==(const DenseParams&, const DenseParams&) = default;
};

/// Full parameter set. Learner vectors are empty when the learner is
/// inactive; exactly one of the frequency/time vectors of a learner is
/// populated otherwise. The same struct carries gradients.
struct FreTSParams {
  RealTensor embedding;  // [d]
  std::vector<FreMLPParams> channel;
  std::vector<FreMLPParams> temporal;
  std::vector<DenseParams> channel_time;
  std::vector<DenseParams> temporal_time;
  RealTensor proj_w1;  // [L*d x d_h]
  RealTensor proj_b1;  // [d_h]
  RealTensor proj_w2;  // [d_h x tau]
  RealTensor proj_b2;  // [tau]

  friend bool operator==(const FreTSParams&, const FreTSParams&) = default;
};

/// Visits every parameter block in canonical order (also the checkpoint
/// order) as f(name, tensor).
template <class Params, class F>
void for_each_block(Params& p, F&& f) {
  f(std::string("embedding"), p.embedding);
  for (std::size_t i = 0; i < p.channel.size(); ++i) {
    const std::string base = "channel." + std::to_string(i) + ".";
    f(base + "w_re", p.channel[i].w_re);
    f(base + "w_im", p.channel[i].w_im);
    f(base + "b_re", p.channel[i].b_re);
    f(base + "b_im", p.channel[i].b_im);
  }
  for (std::size_t i = 0; i < p.channel_time.size(); ++i) {
    const std::string base = "channel_time." + std::to_string(i) + ".";
    f(base + "weight", p.channel_time[i].weight);
    f(base + "bias", p.channel_time[i].bias);
  }
  for (std::size_t i = 0; i < p.temporal.size(); ++i) {
    const std::string base = "temporal." + std::to_string(i) + ".";
    f(base + "w_re", p.temporal[i].w_re);
    f(base + "w_im", p.temporal[i].w_im);
    f(base + "b_re", p.temporal[i].b_re);
    f(base + "b_im", p.temporal[i].b_im);
  }
  for (std::size_t i = 0; i < p.temporal_time.size(); ++i) {
    const std::string base = "temporal_time." + std::to_string(i) + ".";
    f(base + "weight", p.temporal_time[i].weight);
    f(base + "bias", p.temporal_time[i].bias);
  }
  f(std::string("projection.w1"), p.proj_w1);
  f(std::string("projection.b1"), p.proj_b1);
  f(std::string("projection.w2"), p.proj_w2);
  f(std::string("projection.b2"), p.proj_b2);
}

/// Seeded initialisation. Each block draws from its own stream, so
/// disabling a learner leaves every other block unchanged.
FreTSParams init_params(const ModelConfig& config);

/// Zero tensors with the same layout as `like`.
FreTSParams zeros_like(const FreTSParams& like);

/// Throws ConfigError when the parameter shapes do not match the config.
void check_params(const FreTSParams& params, const ModelConfig& config);

std::size_t parameter_count(const FreTSParams& params);

/// H[..., l, k] = X[..., l] * embedding[k].
RealTensor dimension_extension(const RealTensor& x, const RealTensor& embedding);

/// Input [..., N, L, d]. Transforms along N, applies the FreMLP stack on d
/// with bins and timestamps as batch axes, transforms back.
RealTensor channel_learner(const RealTensor& h, std::span<const FreMLPParams> layers,
                           Activation activation);

/// Input [..., N, L, d]. Same as channel_learner along L.
RealTensor temporal_learner(const RealTensor& z, std::span<const FreMLPParams> layers,
                            Activation activation);

/// Real MLP stack on the trailing axis; the time-domain learner.
RealTensor dense_stack_forward(const RealTensor& x, std::span<const DenseParams> layers,
                               Activation activation);

/// sigma(S_flat w1 + b1) w2 + b2 per channel, S [..., N, L, d] -> [..., N, tau].
RealTensor projection(const RealTensor& s, const RealTensor& w1, const RealTensor& b1,
                      const RealTensor& w2, const RealTensor& b2,
                      Activation activation);

/// X [B, N, L] -> predictions [B, N, tau].
RealTensor frets_forward(const RealTensor& x, const FreTSParams& params,
                         const ModelConfig& config);

/// Gradients of sum(output_grad * frets_forward(x)) for every block.
FreTSParams frets_backward_from_output(const RealTensor& x,
                                       const RealTensor& output_grad,
                                       const FreTSParams& params,
                                       const ModelConfig& config);

struct LossAndGrads {
  double loss = 0.0;
  FreTSParams grads;
};

/// Mean-squared error of frets_forward(x) against `targets` and its exact
/// gradient.
LossAndGrads frets_backward(const RealTensor& x, const RealTensor& targets,
                            const FreTSParams& params, const ModelConfig& config);

}  // namespace frets
