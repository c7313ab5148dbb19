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

#include "frets/inspect.hpp"

#include "frets/errors.hpp"

namespace frets {
namespace {

BandSummary summarize(const RealTensor& mass) {
  BandSummary s;
  for (double v : mass.values()) s.total_mass += v;
  s.degenerate = !(s.total_mass > 0.0);
  for (std::size_t i = 0; i < kBandWidths.size(); ++i)
    s.fractions[i] = s.degenerate ? 0.0 : band_fraction(mass, kBandWidths[i]);
  return s;
}

void require_square(const RealTensor& w) {
  if (w.rank() != 2 || w.dim(0) != w.dim(1)) {
    throw DimensionError("band summary needs a square matrix, got " +
                         shape_to_string(w.shape()));
  }
}

}  // namespace

double band_fraction(const RealTensor& squared_mass, std::size_t width) {
  require_square(squared_mass);
  if (width == 0 || width % 2 == 0) throw ConfigError("band width must be odd");
  const std::size_t d = squared_mass.dim(0);
  const std::size_t half = (width - 1) / 2;
  double band = 0.0, total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double v = squared_mass[i * d + j];
      total += v;
      if ((i > j ? i - j : j - i) <= half) band += v;
    }
  }
  return total > 0.0 ? band / total : 0.0;
}

BandSummary band_summary(const RealTensor& w) {
  require_square(w);
  return summarize(hadamard(w, w));
}

BandSummary band_summary(const RealTensor& w_re, const RealTensor& w_im) {
  require_square(w_re);
  return summarize(add(hadamard(w_re, w_re), hadamard(w_im, w_im)));
}

}  // namespace frets
