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

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "frets/tensor.hpp"

namespace frets::testing {

inline RealTensor random_tensor(Shape shape, std::uint64_t seed, double bound = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-bound, bound);
  RealTensor t(std::move(shape));
  for (auto& v : t.values()) v = dist(rng);
  return t;
}

inline void expect_tensor_near(const RealTensor& actual, const RealTensor& expected,
                               double tol) {
  ASSERT_EQ(actual.shape(), expected.shape());
  for (std::size_t i = 0; i < actual.size(); ++i)
    EXPECT_NEAR(actual[i], expected[i], tol) << "at flat index " << i;
}

/// Real signal whose length-n DFT has bins spec_re/spec_im on the retained
/// half (and their conjugates above), by direct summation. Imaginary parts
/// of DC and Nyquist are dropped.
inline std::vector<double> hermitian_signal(const std::vector<double>& spec_re,
                                            const std::vector<double>& spec_im,
                                            std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (std::size_t k = 0; k < spec_re.size(); ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * t) % n) /
                           static_cast<double>(n);
      const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
      const double term = spec_re[k] * std::cos(angle) - spec_im[k] * std::sin(angle);
      acc += edge ? spec_re[k] * std::cos(angle) : 2.0 * term;
    }
    out[t] = acc / static_cast<double>(n);
  }
  return out;
}

/// Fresh directory under the build tree's temp area, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() /
              ("frets_test_" + name + "_" + std::to_string(::testing::UnitTest::GetInstance()
                                                               ->random_seed()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace frets::testing
