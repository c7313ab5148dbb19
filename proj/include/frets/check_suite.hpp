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
#include <string>
#include <vector>

#include "frets/model.hpp"
#include "frets/tensor.hpp"

namespace frets::check {

/// Outcome of one property suite. `worst_seed` is the instance seed with the
/// largest error; when the suite fails it is the first failing instance.
struct SuiteResult {
  std::string name;
  bool passed = true;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::size_t instances = 0;
  std::uint64_t worst_seed = 0;
  double seconds = 0.0;
  std::string detail;
};

/// Time-domain energy against (1/n) * sum over all n bins of |X_k|^2, with
/// the full spectrum from naive_dft and from the retained rfft bins
/// (weighted by conjugate multiplicity). Relative error.
SuiteResult parseval(std::uint64_t seed, std::size_t count = 1000,
                     std::size_t max_length = 128);

/// rfft against naive_dft on the retained bins, `per_length` vectors for
/// every length 1..max_length. Max absolute error.
SuiteResult fft_oracle(std::uint64_t seed, std::size_t max_length = 64,
                       std::size_t per_length = 100);

/// irfft(rfft(x)) == x for lengths 1..max_length.
SuiteResult round_trip(std::uint64_t seed, std::size_t max_length = 128,
                       std::size_t per_length = 4);

/// irfft(rfft(h) * rfft(w)) against direct circular convolution on random
/// pairs of length 8, 16 and 32.
SuiteResult convolution_theorem(std::uint64_t seed, std::size_t count = 500);

/// A spectral FreMLP (identity activation) applied to rfft(h) and mapped back
/// equals circular convolution of h with the kernel whose spectrum is W, plus
/// the signal whose spectrum is B. Covers d = 1 and every (input, output)
/// coordinate pair for d > 1.
SuiteResult fremlp_convolution(std::uint64_t seed, std::size_t count = 200);

/// One FreMLP layer's analytic gradients against central differences.
SuiteResult fremlp_gradient(std::uint64_t seed, std::size_t count = 20);

/// Full-pipeline MSE gradients (N=3, L=4, tau=2, d=2, d_h=3, both learners)
/// against central differences with eps = 1e-6, over `count` seeds.
SuiteResult frets_gradient(std::uint64_t seed, std::size_t count = 20);

std::vector<SuiteResult> run_all(std::uint64_t seed);

/// Relative error used by the gradient suites: |a - b| / max(|a|, |b|, floor).
double relative_error(double analytic, double numeric, double floor = 1e-6);

/// Worst relative error of the analytic FreTS gradients against central
/// differences on one instance.
double frets_gradient_error(const RealTensor& x, const RealTensor& targets,
                            const FreTSParams& params, const ModelConfig& config,
                            double eps = 1e-6);

/// Smallest |pre-activation| over every relu site of the forward pass. Used
/// to keep finite-difference checks away from kinks.
double relu_margin(const RealTensor& x, const FreTSParams& params,
                   const ModelConfig& config);

}  // namespace frets::check
