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

#include "frets/fremlp.hpp"

#include <cmath>

#include <Eigen/Core>

#include "frets/errors.hpp"
#include "frets/random.hpp"

namespace frets {
namespace {

void check_input(const ComplexTensor& input, const FreMLPParams& params,
                 const char* op) {
  params.validate();
  if (input.shape().back() != params.dim()) {
    throw DimensionError(std::string(op) + ": input " +
                         shape_to_string(input.shape()) +
                         " has trailing dimension != d = " +
                         std::to_string(params.dim()));
  }
}

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMatrix>;
using ConstRowMap = Eigen::Map<const RowMatrix>;
using ConstRowVector = Eigen::Map<const Eigen::RowVectorXd>;

// Views a tensor as [rows x trailing dimension].
ConstRowMap rows_of(const RealTensor& t) {
  const std::size_t last = t.shape().back();
  return {t.data(), static_cast<Eigen::Index>(last ? t.size() / last : 0),
          static_cast<Eigen::Index>(last)};
}

RowMap rows_of(RealTensor& t) {
  const std::size_t last = t.shape().back();
  return {t.data(), static_cast<Eigen::Index>(last ? t.size() / last : 0),
          static_cast<Eigen::Index>(last)};
}

ConstRowVector row_vector(const RealTensor& t) {
  return {t.data(), static_cast<Eigen::Index>(t.size())};
}

struct PreActivation {
  RealTensor re;  // same shape as the input
  RealTensor im;
};

// P_r = X_r W_r - X_i W_i + B_r ;  P_i = X_r W_i + X_i W_r + B_i
PreActivation pre_activation(const ComplexTensor& x, const FreMLPParams& p) {
  PreActivation pre{RealTensor(x.shape()), RealTensor(x.shape())};
  const ConstRowMap x_re = rows_of(x.re), x_im = rows_of(x.im);
  const ConstRowMap w_re = rows_of(p.w_re), w_im = rows_of(p.w_im);
  RowMap p_re = rows_of(pre.re), p_im = rows_of(pre.im);
  p_re.noalias() = x_re * w_re;
  p_re.noalias() -= x_im * w_im;
  p_re.rowwise() += row_vector(p.b_re);
  p_im.noalias() = x_re * w_im;
  p_im.noalias() += x_im * w_re;
  p_im.rowwise() += row_vector(p.b_im);
  return pre;
}

void apply_activation(RealTensor& t, Activation activation) {
  if (activation == Activation::kRelu)
    for (auto& v : t.values()) v = v > 0.0 ? v : 0.0;
}

// Upstream gradient masked by the activation derivative at `pre`.
RealTensor gate(const RealTensor& upstream, const RealTensor& pre,
                Activation activation) {
  RealTensor out = upstream;
  if (activation == Activation::kRelu)
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!(pre[i] > 0.0)) out[i] = 0.0;
  return out;
}

}  // namespace

void FreMLPParams::validate() const {
  if (w_re.rank() != 2 || w_re.dim(0) != w_re.dim(1)) {
    throw DimensionError("FreMLP weight must be square, got " +
                         shape_to_string(w_re.shape()));
  }
  const std::size_t d = w_re.dim(0);
  if (w_im.shape() != w_re.shape() || b_re.shape() != Shape{d} ||
      b_im.shape() != Shape{d}) {
    throw DimensionError("FreMLP blocks disagree on d = " + std::to_string(d));
  }
}

ComplexTensor fremlp_forward(const ComplexTensor& input, const FreMLPParams& params,
                             Activation activation) {
  check_input(input, params, "fremlp_forward");
  PreActivation pre = pre_activation(input, params);
  apply_activation(pre.re, activation);
  apply_activation(pre.im, activation);
  return {std::move(pre.re), std::move(pre.im)};
}

FreMLPGrads fremlp_backward(const ComplexTensor& input, const FreMLPParams& params,
                            const ComplexTensor& upstream, Activation activation) {
  check_input(input, params, "fremlp_backward");
  if (upstream.shape() != input.shape()) {
    throw DimensionError("fremlp_backward: upstream " +
                         shape_to_string(upstream.shape()) +
                         " does not match input " + shape_to_string(input.shape()));
  }
  const PreActivation pre = pre_activation(input, params);
  const RealTensor gated_re = gate(upstream.re, pre.re, activation);
  const RealTensor gated_im = gate(upstream.im, pre.im, activation);
  const ConstRowMap x_re = rows_of(input.re), x_im = rows_of(input.im);
  const ConstRowMap g_re = rows_of(gated_re), g_im = rows_of(gated_im);
  const ConstRowMap w_re = rows_of(params.w_re), w_im = rows_of(params.w_im);
  const std::size_t d = params.dim();

  FreMLPGrads grads{RealTensor({d, d}), RealTensor({d, d}), RealTensor({d}),
                    RealTensor({d}), ComplexTensor(input.shape())};
  RowMap dw_re = rows_of(grads.w_re), dw_im = rows_of(grads.w_im);
  dw_re.noalias() = x_re.transpose() * g_re;
  dw_re.noalias() += x_im.transpose() * g_im;
  dw_im.noalias() = x_re.transpose() * g_im;
  dw_im.noalias() -= x_im.transpose() * g_re;
  rows_of(grads.b_re) = g_re.colwise().sum();
  rows_of(grads.b_im) = g_im.colwise().sum();
  RowMap dx_re = rows_of(grads.input.re), dx_im = rows_of(grads.input.im);
  dx_re.noalias() = g_re * w_re.transpose();
  dx_re.noalias() += g_im * w_im.transpose();
  dx_im.noalias() = g_im * w_re.transpose();
  dx_im.noalias() -= g_re * w_im.transpose();
  return grads;
}

FreMLPParams fremlp_init(std::size_t d, std::uint64_t seed) {
  if (d == 0) throw ConfigError("fremlp_init: d must be >= 1");
  const double bound = 1.0 / std::sqrt(static_cast<double>(d));
  FreMLPParams p;
  p.w_re = uniform_tensor({d, d}, bound, derive_seed(seed, 0));
  p.w_im = uniform_tensor({d, d}, bound, derive_seed(seed, 1));
  p.b_re = RealTensor({d});
  p.b_im = RealTensor({d});
  return p;
}

FreMLPParams fremlp_identity(std::size_t d) {
  if (d == 0) throw ConfigError("fremlp_identity: d must be >= 1");
  return {RealTensor::identity(d), RealTensor({d, d}), RealTensor({d}),
          RealTensor({d})};
}

ComplexTensor fremlp_stack_forward(const ComplexTensor& input,
                                   std::span<const FreMLPParams> layers,
                                   Activation activation) {
  if (layers.empty()) throw ConfigError("fremlp stack needs at least one layer");
  ComplexTensor y = fremlp_forward(input, layers[0], activation);
  for (std::size_t i = 1; i < layers.size(); ++i)
    y = fremlp_forward(y, layers[i], activation);
  return y;
}

FreMLPStackGrads fremlp_stack_backward(const ComplexTensor& input,
                                       std::span<const FreMLPParams> layers,
                                       const ComplexTensor& upstream,
                                       Activation activation) {
  if (layers.empty()) throw ConfigError("fremlp stack needs at least one layer");
  std::vector<ComplexTensor> inputs{input};
  for (std::size_t i = 0; i + 1 < layers.size(); ++i)
    inputs.push_back(fremlp_forward(inputs.back(), layers[i], activation));

  FreMLPStackGrads out;
  out.layers.resize(layers.size());
  ComplexTensor grad = upstream;
  for (std::size_t i = layers.size(); i-- > 0;) {
    FreMLPGrads g = fremlp_backward(inputs[i], layers[i], grad, activation);
    grad = std::move(g.input);
    g.input = {};
    out.layers[i] = std::move(g);
  }
  out.input = std::move(grad);
  return out;
}

}  // namespace frets
