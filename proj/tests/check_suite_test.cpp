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

#include <sstream>

#include "commands.hpp"
#include "frets/check_suite.hpp"
#include "test_support.hpp"

namespace frets {
namespace {

void expect_pass(const check::SuiteResult& r) {
  EXPECT_TRUE(r.passed) << r.name << ": max_error " << r.max_error << " tol " << r.tolerance
                        << " seed " << r.worst_seed << " " << r.detail;
  EXPECT_GT(r.instances, 0u);
  EXPECT_LT(r.max_error, r.tolerance);
}

TEST(CheckSuite, Parseval) { expect_pass(check::parseval(0)); }
TEST(CheckSuite, FftOracle) { expect_pass(check::fft_oracle(0)); }
TEST(CheckSuite, RoundTrip) { expect_pass(check::round_trip(0)); }
TEST(CheckSuite, ConvolutionTheorem) { expect_pass(check::convolution_theorem(0)); }
TEST(CheckSuite, FreMLPConvolution) { expect_pass(check::fremlp_convolution(0)); }
TEST(CheckSuite, FreMLPGradient) { expect_pass(check::fremlp_gradient(0)); }
TEST(CheckSuite, FretsGradient) { expect_pass(check::frets_gradient(0)); }

TEST(CheckSuite, OtherSeedsPass) {
  for (std::uint64_t seed : {1u, 77u}) {
    expect_pass(check::parseval(seed, 200));
    expect_pass(check::frets_gradient(seed, 5));
  }
}

TEST(CheckSuite, RelativeErrorFloor) {
  EXPECT_EQ(check::relative_error(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(check::relative_error(2.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(check::relative_error(1e-9, 0.0), 1e-9 / 1e-6);
}

TEST(CheckCommand, ReportsEverySuite) {
  std::ostringstream log;
  EXPECT_EQ(cli::cmd_check({}, log), cli::kExitOk);
  const std::string out = log.str();
  for (const char* name : {"parseval", "fft_oracle", "round_trip", "convolution_theorem",
                           "fremlp_convolution", "fremlp_gradient", "frets_gradient"}) {
    EXPECT_NE(out.find(name), std::string::npos) << name;
  }
  EXPECT_NE(out.find("max_error"), std::string::npos);
}

}  // namespace
}  // namespace frets
