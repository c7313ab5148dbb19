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
#include <vector>

#include "frets/tensor.hpp"

namespace frets {

enum class Activation { kRelu, kIdentity };

/// One frequency-domain MLP layer: complex weight W = w_re + j w_im (d x d)
/// and complex bias B = b_re + j b_im (d).
struct FreMLPParams {
  RealTensor w_re;
  RealTensor w_im;
  RealTensor b_re;
  RealTensor b_im;

  std::size_t dim() const { return w_re.dim(0); }
  /// Throws DimensionError unless all four blocks agree on d.
  void validate() const;

  friend bool operator==(const FreMLPParams&, const FreMLPParams&) = default;
};

/// Gradients of a scalar loss with respect to one layer's parameters and
/// its complex input.
struct FreMLPGrads {
  RealTensor w_re;
  RealTensor w_im;
  RealTensor b_re;
  RealTensor b_im;
  ComplexTensor input;
};

/// Y = sigma(Re(X) W_r - Im(X) W_i + B_r) + j sigma(Re(X) W_i + Im(X) W_r + B_i),
/// applied to every row of `input` (trailing dimension d, any leading shape).
/// The activation acts on the real and imaginary parts independently.
ComplexTensor fremlp_forward(const ComplexTensor& input, const FreMLPParams& params,
                             Activation activation);

/// Reverse-mode gradients of fremlp_forward. Pre-activations are recomputed
/// from `input`; the relu subgradient at exactly zero is zero.
FreMLPGrads fremlp_backward(const ComplexTensor& input, const FreMLPParams& params,
                            const ComplexTensor& upstream, Activation activation);

/// Weights uniform on [-1/sqrt(d), 1/sqrt(d)], biases zero.
FreMLPParams fremlp_init(std::size_t d, std::uint64_t seed);

/// W_r = I, everything else zero.
FreMLPParams fremlp_identity(std::size_t d);

ComplexTensor fremlp_stack_forward(const ComplexTensor& input,
                                   std::span<const FreMLPParams> layers,
                                   Activation activation);

struct FreMLPStackGrads {
  std::vector<FreMLPGrads> layers;  // parameter grads; `input` unused
  ComplexTensor input;
};

FreMLPStackGrads fremlp_stack_backward(const ComplexTensor& input,
                                       std::span<const FreMLPParams> layers,
                                       const ComplexTensor& upstream,
                                       Activation activation);

}  // namespace frets
