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

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "frets/data.hpp"
#include "frets/errors.hpp"
#include "frets/fft.hpp"
#include "test_support.hpp"

namespace frets {
namespace {

using testing::random_tensor;
using testing::TempDir;

SeriesMatrix parse(const std::string& text, CsvOptions options = {}) {
  std::istringstream in(text);
  return parse_csv(in, options);
}

std::string error_of(const std::string& text, CsvOptions options = {}) {
  try {
    parse(text, options);
  } catch (const IngestionError& e) {
    return e.what();
  }
  return "";
}

TEST(Csv, TwoChannelsThreeRows) {
  const SeriesMatrix s = parse("a,b\n1,2\n3,4\n5,6\n");
  EXPECT_EQ(s.names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(s.values, RealTensor::matrix(2, 3, {1, 3, 5, 2, 4, 6}));
}

TEST(Csv, EmptyDataSection) {
  EXPECT_THROW(parse("a,b\n"), IngestionError);
  EXPECT_THROW(parse(""), IngestionError);
}

TEST(Csv, ForwardFillCopiesPreviousValue) {
  CsvOptions o;
  o.missing = MissingPolicy::kForwardFill;
  const SeriesMatrix s = parse("a,b\n1,2\n3,\n5,6\n", o);
  EXPECT_EQ(s.values.at({1, 1}), 2.0);
  EXPECT_NE(error_of("a,b\n1,2\n3,\n"), "");
  EXPECT_NE(error_of("a,b\n,2\n", o).find("nothing to forward-fill"), std::string::npos);
}

TEST(Csv, RaggedRowNamesRow) {
  const std::string msg = error_of("a,b\n1,2\n3\n");
  EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
}

TEST(Csv, UnparsableFieldNamesRowAndColumn) {
  const std::string msg = error_of("a,b\n1,2\n3,x4\n");
  EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
  EXPECT_NE(error_of("a\n1e999\n"), "");
}

TEST(Csv, TimestampColumnIsIgnored) {
  CsvOptions o;
  o.timestamp_column = true;
  const SeriesMatrix s = parse("date,a\n2020-01-01,1.5\n2020-01-02,-2\n", o);
  EXPECT_EQ(s.names, (std::vector<std::string>{"a"}));
  EXPECT_EQ(s.values, RealTensor::matrix(1, 2, {1.5, -2}));
}

TEST(Csv, RoundTripIsExact) {
  TempDir dir("csv");
  const SeriesMatrix s{random_tensor({3, 40}, 1, 1e3), {"x", "y", "z"}};
  write_csv(s, dir.path() / "s.csv");
  const SeriesMatrix back = ingest_csv(dir.path() / "s.csv");
  EXPECT_EQ(back.values, s.values);
  EXPECT_EQ(back.names, s.names);
}

TEST(Csv, MissingFileIsIoErrorNamingPath) {
  try {
    ingest_csv("/nonexistent/frets/data.csv");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/frets/data.csv"), std::string::npos);
  }
}

SeriesMatrix ramp(std::size_t t) {
  RealTensor v({1, t});
  for (std::size_t i = 0; i < t; ++i) v[i] = static_cast<double>(i);
  return {v, {"r"}};
}

TEST(Split, SevenTwoOne) {
  const SeriesSplit s = chronological_split(ramp(100), {0.7, 0.2, 0.1}, 1);
  EXPECT_EQ(s.train.length(), 70u);
  EXPECT_EQ(s.val.length(), 20u);
  EXPECT_EQ(s.test.length(), 10u);
}

TEST(Split, SixTwoTwo) {
  const SeriesSplit s = chronological_split(ramp(10), {0.6, 0.2, 0.2}, 1);
  EXPECT_EQ(s.train.length(), 6u);
  EXPECT_EQ(s.val.length(), 2u);
  EXPECT_EQ(s.test.length(), 2u);
}

TEST(Split, ConcatenationReproducesSeries) {
  const SeriesMatrix full = ramp(137);
  const SeriesSplit s = chronological_split(full, {}, 5);
  std::vector<double> joined;
  for (const SeriesMatrix* part : {&s.train, &s.val, &s.test})
    joined.insert(joined.end(), part->values.values().begin(), part->values.values().end());
  EXPECT_EQ(joined, std::vector<double>(full.values.values().begin(), full.values.values().end()));
}

TEST(Split, ShortSegmentIsConfigError) {
  EXPECT_THROW(chronological_split(ramp(100), {}, 11), ConfigError);
  EXPECT_THROW(chronological_split(ramp(100), {0.5, 0.5, 0.0}, 1), ConfigError);
  EXPECT_THROW(chronological_split(ramp(100), {0.5, 0.2, 0.2}, 1), ConfigError);
}

TEST(Windows, CountExamples) {
  EXPECT_EQ(make_windows(ramp(5), 2, 1).size(), 3u);
  EXPECT_EQ(make_windows(ramp(7), 4, 3).size(), 1u);
  EXPECT_THROW(make_windows(ramp(6), 4, 3), ConfigError);
}

TEST(Windows, CountFormulaOnRandomTriples) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const std::size_t l = 1 + rng() % 20, tau = 1 + rng() % 20;
    const std::size_t t = l + tau + rng() % 50;
    EXPECT_EQ(make_windows(ramp(t), l, tau).size(), t - l - tau + 1);
  }
}

TEST(Windows, SampleZeroLayout) {
  const WindowedDataset w = make_windows(ramp(10), 3, 2);
  EXPECT_EQ(w.input(0), RealTensor::matrix(1, 3, {0, 1, 2}));
  EXPECT_EQ(w.target(0), RealTensor::matrix(1, 2, {3, 4}));
  EXPECT_EQ(w.target(5), RealTensor::matrix(1, 2, {8, 9}));
}

TEST(Windows, NeverCrossSplitBoundary) {
  const SeriesSplit s = chronological_split(ramp(100), {}, 8);
  const WindowedDataset w = make_windows(s.train, 5, 3);
  const WindowedDataset last = w;
  EXPECT_EQ(last.target(last.size() - 1)[2], 69.0);
}

TEST(Windows, GatherStacksSamples) {
  RealTensor v({2, 10});
  for (std::size_t i = 0; i < 20; ++i) v[i] = static_cast<double>(i);
  const WindowedDataset w = make_windows({v, {"a", "b"}}, 3, 2);
  RealTensor x, y;
  const std::size_t idx[2] = {4, 0};
  w.gather(idx, x, y);
  EXPECT_EQ(x.shape(), (Shape{2, 2, 3}));
  EXPECT_EQ(x.at({0, 1, 0}), 14.0);
  EXPECT_EQ(y.at({1, 0, 1}), 4.0);
  const std::size_t bad[1] = {6};
  EXPECT_THROW(w.gather(bad, x, y), DimensionError);
}

TEST(Synth, PureToneConcentratesInOneBin) {
  SynthSpec spec;
  spec.length = 64;
  spec.components = {{0, 5.0, 1.0, 0.4}};
  const SeriesMatrix s = synth_sinusoids(spec);
  const ComplexTensor x = rfft(s.values, 1);
  double other = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k)
    if (k != 5) other += x.re[k] * x.re[k] + x.im[k] * x.im[k];
  const double peak = x.re[5] * x.re[5] + x.im[5] * x.im[5];
  EXPECT_NEAR(peak, 32.0 * 32.0, 1e-9);
  EXPECT_LT(other, 1e-18 * peak + 1e-20);
}

TEST(Synth, ZeroAmplitudeNoNoise) {
  SynthSpec spec;
  spec.channels = 3;
  spec.length = 20;
  spec.components = {{1, 2.0, 0.0, 0.0}};
  const SeriesMatrix s = synth_sinusoids(spec);
  for (double v : s.values.values()) EXPECT_EQ(v, 0.0);
}

TEST(Synth, NoiseVarianceMatches) {
  SynthSpec spec;
  spec.length = 10000;
  spec.noise_std = 0.3;
  spec.seed = 9;
  const SeriesMatrix s = synth_sinusoids(spec);
  double mean = 0.0;
  for (double v : s.values.values()) mean += v;
  mean /= 10000.0;
  double var = 0.0;
  for (double v : s.values.values()) var += (v - mean) * (v - mean);
  var /= 9999.0;
  EXPECT_LT(std::abs(var - 0.09) / 0.09, 0.05);
}

TEST(Synth, DeterministicPerSeed) {
  SynthSpec spec;
  spec.channels = 2;
  spec.length = 50;
  spec.noise_std = 1.0;
  spec.seed = 4;
  EXPECT_EQ(synth_sinusoids(spec).values, synth_sinusoids(spec).values);
  SynthSpec other = spec;
  other.seed = 5;
  EXPECT_NE(synth_sinusoids(spec).values, synth_sinusoids(other).values);
}

TEST(Synth, InvalidSpec) {
  SynthSpec spec;
  spec.length = 10;
  spec.components = {{2, 1.0, 1.0, 0.0}};
  EXPECT_THROW(synth_sinusoids(spec), ConfigError);
  spec.components.clear();
  spec.noise_std = -1.0;
  EXPECT_THROW(synth_sinusoids(spec), ConfigError);
}

TEST(WriteFileAtomic, ReplacesContents) {
  TempDir dir("atomic");
  write_file_atomic(dir.path() / "f.txt", "one");
  write_file_atomic(dir.path() / "f.txt", "two");
  std::ifstream in(dir.path() / "f.txt");
  std::string s;
  std::getline(in, s);
  EXPECT_EQ(s, "two");
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir.path()),
                          std::filesystem::directory_iterator()),
            1);
}

}  // namespace
}  // namespace frets
