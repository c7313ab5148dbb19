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

#include <array>
#include <cstddef>

#include "frets/tensor.hpp"

namespace frets {

inline constexpr std::array<std::size_t, 3> kBandWidths = {1, 3, 5};

/// Squared-weight mass of a square matrix inside diagonal bands. A band of
/// width w holds the entries with |row - col| <= (w - 1) / 2.
struct BandSummary {
  double total_mass = 0.0;
  bool degenerate = false;  // total mass is zero; fractions are reported as 0
  std::array<double, kBandWidths.size()> fractions{};
};

double band_fraction(const RealTensor& squared_mass, std::size_t width);

BandSummary band_summary(const RealTensor& w);

/// Uses |W|^2 = w_re^2 + w_im^2 per entry.
BandSummary band_summary(const RealTensor& w_re, const RealTensor& w_im);

}  // namespace frets
