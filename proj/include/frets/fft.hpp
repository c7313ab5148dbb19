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

#include <cstddef>

#include "frets/tensor.hpp"

namespace frets {

/// Number of unique bins kept by the real transform of a length-n signal.
constexpr std::size_t rfft_bins(std::size_t n) { return n / 2 + 1; }

/// Unnormalized forward DFT of a real tensor along `axis`, keeping the
/// n/2 + 1 non-redundant bins (DC and, for even n, Nyquist included).
ComplexTensor rfft(const RealTensor& x, std::size_t axis);

/// Inverse of rfft with 1/n scaling. The imaginary parts of the DC bin and
/// of the Nyquist bin (even n) do not contribute to a real signal and are
/// ignored.
RealTensor irfft(const ComplexTensor& spectrum, std::size_t n, std::size_t axis);

/// Direct O(n^2) evaluation of all n DFT bins. Test oracle for rfft.
ComplexTensor naive_dft(const RealTensor& x, std::size_t axis);

/// y[t] = sum_s h[s] * w[(t - s) mod n] for two 1-D tensors of equal length.
RealTensor circular_conv(const RealTensor& h, const RealTensor& w);

/// Pulls a loss gradient on rfft(x) back to a gradient on x.
///
/// Each retained bin k that is neither DC nor Nyquist stands in for itself
/// and its dropped conjugate partner; the adjoint accounts for that by
/// weighting every retained bin once (x_grad[t] = Re sum_k G_k e^{+2 pi i kt/n}).
RealTensor rfft_adjoint(const ComplexTensor& spectrum_grad, std::size_t n,
                        std::size_t axis);

/// Pulls a loss gradient on irfft(X, n) back to a gradient on X.
ComplexTensor irfft_adjoint(const RealTensor& signal_grad, std::size_t axis);

#ifdef FRETS_FAULT_INJECTION
namespace fault {
/// Drops the conjugate-bin weighting inside both adjoints. Negative control
/// for the gradient suite; only compiled into fault-injection builds.
void set_skip_adjoint_scaling(bool skip);
}  // namespace fault
#endif

}  // namespace frets
