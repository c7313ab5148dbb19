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
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "frets/checkpoint.hpp"
#include "frets/errors.hpp"
#include "frets/inspect.hpp"
#include "frets/run_config.hpp"
#include "test_support.hpp"

namespace frets {
namespace {

namespace fs = std::filesystem;
using namespace frets::cli;
using testing::random_tensor;
using testing::TempDir;

std::string slurp(const fs::path& p) { return read_text_file(p); }

void spit(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

Checkpoint sample_checkpoint() {
  Checkpoint c;
  c.model.lookback = 6;
  c.model.horizon = 3;
  c.model.channels = 2;
  c.model.embed_dim = 4;
  c.model.hidden_dim = 5;
  c.model.seed = 17;
  c.channel_names = {"load", "temp"};
  c.scaler = MinMaxScaler({-1.0, 10.0}, {3.0, 10.0});
  c.params = init_params(c.model);
  c.summary = {4, 2, {0.125, 0.25}};
  return c;
}

TEST(Checkpoint, RoundTripIsBitIdentical) {
  const Checkpoint c = sample_checkpoint();
  const std::string bytes = serialize_checkpoint(c);
  const Checkpoint back = parse_checkpoint(bytes);
  EXPECT_EQ(back.params, c.params);
  EXPECT_EQ(back.model, c.model);
  EXPECT_EQ(back.channel_names, c.channel_names);
  EXPECT_EQ(back.scaler.min(), c.scaler.min());
  EXPECT_EQ(back.summary.best_val.mae, 0.125);
  EXPECT_EQ(serialize_checkpoint(back), bytes);
  const RealTensor window = random_tensor({2, 6}, 3, 5.0);
  EXPECT_EQ(forecast(back, window), forecast(c, window));
}

TEST(Checkpoint, ForecastMatchesInProcessPipeline) {
  const Checkpoint c = sample_checkpoint();
  const RealTensor window = random_tensor({2, 6}, 4, 5.0);
  const RealTensor scaled = c.scaler.apply(window).reshaped({1, 2, 6});
  const RealTensor expected =
      c.scaler.invert(frets_forward(scaled, c.params, c.model).reshaped({2, 3}));
  EXPECT_EQ(forecast(c, window), expected);
  EXPECT_THROW(forecast(c, RealTensor({2, 5})), DimensionError);
}

// Zero projection: every forecast is the inverse-scaled b2.
TEST(Checkpoint, ZeroProjectionForecastsInverseScaledBias) {
  Checkpoint c = sample_checkpoint();
  c.params = zeros_like(c.params);
  c.params.proj_b2 = RealTensor::vector({0.5, 0.5, 0.5});
  const RealTensor out = forecast(c, RealTensor({2, 6}, 2.0));
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(out.at({0, k}), 1.0);   // -1 + 0.5 * 4
    EXPECT_EQ(out.at({1, k}), 10.0);  // degenerate channel
  }
}

TEST(Checkpoint, CorruptionIsDetected) {
  const std::string bytes = serialize_checkpoint(sample_checkpoint());
  EXPECT_THROW(parse_checkpoint("nope\n"), IngestionError);
  EXPECT_THROW(parse_checkpoint(bytes.substr(0, bytes.size() - 8)), IngestionError);
  EXPECT_THROW(parse_checkpoint(bytes + "x"), IngestionError);
  std::string renamed = bytes;
  renamed.replace(renamed.find("\"embedding\""), 11, "\"embeddinX\"");
  EXPECT_THROW(parse_checkpoint(renamed), IngestionError);
}

TEST(RunConfig, ParsesAndResolvesPaths) {
  const RunConfig rc = parse_run_config(
      R"({"dataset": "data/x.csv", "lookback": 12, "horizon": 4, "embed_dim": 8,
          "split": [0.6, 0.2, 0.2], "learner_domain": "time", "seed": 3,
          "missing_policy": "forward_fill", "output_dir": "runs/a"})",
      "/base");
  EXPECT_EQ(rc.dataset, fs::path("/base/data/x.csv"));
  EXPECT_EQ(rc.output_dir, fs::path("/base/runs/a"));
  EXPECT_EQ(rc.model.lookback, 12u);
  EXPECT_EQ(rc.model.embed_dim, 8u);
  EXPECT_EQ(rc.model.domain, LearnerDomain::kTime);
  EXPECT_EQ(rc.model.seed, 3u);
  EXPECT_EQ(rc.train.seed, 3u);
  EXPECT_EQ(rc.split.train, 0.6);
  EXPECT_EQ(rc.csv.missing, MissingPolicy::kForwardFill);
}

std::string config_error(const std::string& json) {
  try {
    parse_run_config(json);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(RunConfig, RejectsUnknownAndMissingKeys) {
  EXPECT_NE(config_error(R"({"dataset":"a","lookback":2,"horizon":1,"lookbak":3})")
                .find("lookbak"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"dataset":"a","lookback":2})").find("horizon"), std::string::npos);
  EXPECT_NE(config_error(R"({"dataset":"a","lookback":-2,"horizon":1})"), "");
  EXPECT_NE(config_error(R"({"dataset":"a","lookback":2,"horizon":1,"split":[1,2]})"), "");
  EXPECT_NE(config_error("[1,2]"), "");
  EXPECT_NE(config_error("{"), "");
}

TEST(SynthSpec, ParsesComponents) {
  const SynthFileSpec s = parse_synth_spec(
      R"({"channels": 2, "length": 30, "period_base": 10, "noise_std": 0.1, "seed": 4,
          "components": [{"channel": 1, "cycles": 2, "amplitude": 0.5, "phase": 1}],
          "file": "x.csv"})");
  EXPECT_EQ(s.spec.channels, 2u);
  EXPECT_EQ(s.spec.components.size(), 1u);
  EXPECT_EQ(s.spec.components[0].channel, 1u);
  EXPECT_EQ(s.file, "x.csv");
  EXPECT_THROW(parse_synth_spec(R"({"channels": 1, "length": 3, "file": "../x.csv"})"),
               ConfigError);
  EXPECT_THROW(parse_synth_spec(R"({"channels": 1, "length": 3, "colour": 1})"), ConfigError);
}

TEST(Bands, IdentityIsFullyDiagonal) {
  const BandSummary b = band_summary(RealTensor::identity(5));
  EXPECT_FALSE(b.degenerate);
  for (double f : b.fractions) EXPECT_EQ(f, 1.0);
}

TEST(Bands, UniformMatrixCountsBandEntries) {
  // Brute-force band masks for d = 4: 4, 10 and 14 of 16 entries.
  const BandSummary b = band_summary(RealTensor({4, 4}, 1.0));
  EXPECT_DOUBLE_EQ(b.fractions[0], 4.0 / 16.0);
  EXPECT_DOUBLE_EQ(b.fractions[1], 10.0 / 16.0);
  EXPECT_DOUBLE_EQ(b.fractions[2], 14.0 / 16.0);
  EXPECT_DOUBLE_EQ(b.total_mass, 16.0);
}

TEST(Bands, ZeroMatrixIsDegenerate) {
  const BandSummary b = band_summary(RealTensor({3, 3}), RealTensor({3, 3}));
  EXPECT_TRUE(b.degenerate);
  EXPECT_EQ(b.total_mass, 0.0);
  EXPECT_THROW(band_fraction(RealTensor({3, 3}, 1.0), 2), ConfigError);
}

TEST(Bands, ComplexMagnitude) {
  RealTensor re({2, 2}), im({2, 2});
  re.at({0, 0}) = 3.0;
  im.at({0, 1}) = 4.0;
  const BandSummary b = band_summary(re, im);
  EXPECT_DOUBLE_EQ(b.total_mass, 25.0);
  EXPECT_DOUBLE_EQ(b.fractions[0], 9.0 / 25.0);
  EXPECT_DOUBLE_EQ(b.fractions[1], 1.0);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ConfigError("x")), kExitConfig);
  EXPECT_EQ(exit_code_for(IoError("x")), kExitIo);
  EXPECT_EQ(exit_code_for(IngestionError("x")), kExitIo);
  EXPECT_EQ(exit_code_for(DimensionError("x")), kExitShape);
  EXPECT_EQ(exit_code_for(TrainingError("x")), kExitNumeric);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), kExitUnexpected);
  const std::set<int> distinct = {kExitConfig, kExitIo, kExitShape, kExitProperty};
  EXPECT_EQ(distinct.size(), 4u);
}

// Small end-to-end workspace: synthetic data plus a run config.
class CommandTest : public ::testing::Test {
 protected:
  CommandTest() : dir_("commands") {}

  void SetUp() override {
    spit(dir_.path() / "synth.json",
         R"({"channels": 3, "length": 240, "period_base": 24, "noise_std": 0.01, "seed": 2,
             "components": [{"channel": 0, "cycles": 1, "amplitude": 1, "phase": 0},
                            {"channel": 1, "cycles": 2, "amplitude": 0.5, "phase": 1},
                            {"channel": 2, "cycles": 1, "amplitude": 2, "phase": 2}]})");
    std::ostringstream log;
    ASSERT_EQ(cmd_synth({dir_.path() / "synth.json", std::nullopt, dir_.path()}, log), kExitOk);
    write_config("run.json", "");
  }

  void write_config(const std::string& name, const std::string& extra) {
    spit(dir_.path() / name, R"({"dataset": "synth.csv", "lookback": 12, "horizon": 6,
        "embed_dim": 4, "hidden_dim": 8, "epochs": 2, "batch_size": 16, "seed": 1)" +
                                 extra + "}");
  }

  fs::path train_run(const std::string& config, const std::string& out) {
    std::ostringstream log;
    TrainOptions o{dir_.path() / config, std::nullopt, dir_.path() / out};
    EXPECT_EQ(cmd_train(o, log), kExitOk);
    return dir_.path() / out;
  }

  const fs::path& root() const { return dir_.path(); }

 private:
  TempDir dir_;
};

TEST_F(CommandTest, SynthWritesRequestedDimensions) {
  const SeriesMatrix s = ingest_csv(root() / "synth.csv");
  EXPECT_EQ(s.channels(), 3u);
  EXPECT_EQ(s.length(), 240u);
}

TEST_F(CommandTest, SynthIsByteIdenticalAndExact) {
  const std::string first = slurp(root() / "synth.csv");
  std::ostringstream log;
  ASSERT_EQ(cmd_synth({root() / "synth.json", std::nullopt, root() / "again"}, log), kExitOk);
  EXPECT_EQ(slurp(root() / "again" / "synth.csv"), first);

  spit(root() / "clean.json",
       R"({"channels": 1, "length": 48, "period_base": 24, "file": "clean.csv",
           "components": [{"channel": 0, "cycles": 2, "amplitude": 1.5, "phase": 0.25}]})");
  ASSERT_EQ(cmd_synth({root() / "clean.json", std::nullopt, root()}, log), kExitOk);
  const SeriesMatrix s = ingest_csv(root() / "clean.csv");
  for (std::size_t t = 0; t < 48; ++t)
    EXPECT_EQ(s.values[t], 1.5 * std::sin(2.0 * std::numbers::pi * 2.0 *
                                              static_cast<double>(t) / 24.0 + 0.25));
}

TEST_F(CommandTest, TrainWritesArtifactsAndEvaluateReproducesValMae) {
  const fs::path out = train_run("run.json", "out");
  ASSERT_TRUE(fs::exists(out / kCheckpointFile));
  ASSERT_TRUE(fs::exists(out / kEpochLogFile));
  const Checkpoint c = load_checkpoint(out / kCheckpointFile);
  EXPECT_EQ(c.summary.epochs_run, 2u);

  std::ostringstream log;
  EvaluateOptions e;
  e.checkpoint = out / kCheckpointFile;
  e.split = "val";
  e.config = root() / "run.json";
  e.out = out;
  ASSERT_EQ(cmd_evaluate(e, log), kExitOk);
  const auto metrics = nlohmann::json::parse(slurp(out / "metrics_val.json"));
  EXPECT_EQ(metrics["metrics"]["mae"].get<double>(), c.summary.best_val.mae);

  std::ostringstream again;
  ASSERT_EQ(cmd_evaluate(e, again), kExitOk);
  EXPECT_EQ(log.str(), again.str());
}

TEST_F(CommandTest, TrainTwiceIsByteIdentical) {
  const fs::path a = train_run("run.json", "a");
  const fs::path b = train_run("run.json", "b");
  EXPECT_EQ(slurp(a / kCheckpointFile), slurp(b / kCheckpointFile));
  EXPECT_EQ(slurp(a / kEpochLogFile), slurp(b / kEpochLogFile));
}

TEST_F(CommandTest, ZeroEpochsCheckpointsInitialParameters) {
  write_config("zero.json", R"(, "epochs": 0)");
  const fs::path out = train_run("zero.json", "zero");
  const Checkpoint c = load_checkpoint(out / kCheckpointFile);
  EXPECT_EQ(c.params, init_params(c.model));
  EXPECT_EQ(c.summary.epochs_run, 0u);
}

TEST_F(CommandTest, MissingDatasetNamesPath) {
  spit(root() / "missing.json",
       R"({"dataset": "nowhere.csv", "lookback": 12, "horizon": 6})");
  std::ostringstream log;
  try {
    cmd_train({root() / "missing.json", std::nullopt, root() / "m"}, log);
    FAIL();
  } catch (const IoError& e) {
    EXPECT_EQ(exit_code_for(e), kExitIo);
    EXPECT_NE(std::string(e.what()).find("nowhere.csv"), std::string::npos);
  }
  EXPECT_FALSE(fs::exists(root() / "m" / kCheckpointFile));
}

TEST_F(CommandTest, EvaluateRejectsChannelMismatch) {
  const fs::path out = train_run("run.json", "out");
  {
    std::ofstream f(root() / "two.csv");
    f << "a,b\n";
    for (int i = 0; i < 240; ++i) f << i << "," << -i << "\n";
  }
  EvaluateOptions e;
  e.checkpoint = out / kCheckpointFile;
  e.data = root() / "two.csv";
  std::ostringstream log;
  try {
    cmd_evaluate(e, log);
    FAIL();
  } catch (const DimensionError& err) {
    const std::string msg = err.what();
    EXPECT_NE(msg.find("N=3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("N=2"), std::string::npos) << msg;
  }
}

TEST_F(CommandTest, PredictMatchesForecastAndChecksRows) {
  const fs::path out = train_run("run.json", "out");
  const SeriesMatrix s = ingest_csv(root() / "synth.csv");
  write_csv(s.slice(100, 112), root() / "tail.csv");
  std::ostringstream log;
  ASSERT_EQ(cmd_predict({out / kCheckpointFile, root() / "tail.csv", root() / "pred"}, log),
            kExitOk);
  const SeriesMatrix pred = ingest_csv(root() / "pred" / kForecastFile);
  EXPECT_EQ(pred.names, s.names);
  EXPECT_EQ(pred.length(), 6u);
  const Checkpoint c = load_checkpoint(out / kCheckpointFile);
  EXPECT_EQ(pred.values, forecast(c, s.slice(100, 112).values));

  write_csv(s.slice(100, 111), root() / "short.csv");
  EXPECT_THROW(cmd_predict({out / kCheckpointFile, root() / "short.csv", root()}, log),
               DimensionError);
}

TEST_F(CommandTest, InspectWeightsWritesMatricesAndRejectsAbsentLearner) {
  const fs::path out = train_run("run.json", "out");
  std::ostringstream log;
  InspectOptions o;
  o.checkpoint = out / kCheckpointFile;
  o.which = "channel";
  o.out = root() / "weights";
  ASSERT_EQ(cmd_inspect_weights(o, log), kExitOk);
  const SeriesMatrix w = ingest_csv(root() / "weights" / "channel_0_w_re.csv");
  const Checkpoint c = load_checkpoint(o.checkpoint);
  EXPECT_EQ(w.values, transpose(c.params.channel[0].w_re));
  const auto bands =
      nlohmann::json::parse(slurp(root() / "weights" / "channel_0_band_summary.json"));
  EXPECT_EQ(bands["d"].get<std::size_t>(), 4u);
  EXPECT_TRUE(bands["magnitude"].contains("band_3"));

  write_config("tl.json", R"(, "use_channel_learner": false)");
  const fs::path tl = train_run("tl.json", "tl");
  o.checkpoint = tl / kCheckpointFile;
  EXPECT_THROW(cmd_inspect_weights(o, log), ConfigError);
  o.which = "temporal";
  o.layer = 3;
  EXPECT_THROW(cmd_inspect_weights(o, log), ConfigError);
}

TEST_F(CommandTest, SeedOverrideChangesTrajectory) {
  const fs::path a = train_run("run.json", "a");
  std::ostringstream log;
  TrainOptions o{root() / "run.json", 99, root() / "seeded"};
  ASSERT_EQ(cmd_train(o, log), kExitOk);
  EXPECT_NE(slurp(a / kCheckpointFile), slurp(root() / "seeded" / kCheckpointFile));
  EXPECT_EQ(load_checkpoint(root() / "seeded" / kCheckpointFile).model.seed, 99u);
}

TEST(CheckCommand, SkipFlagNeedsFaultBuild) {
  std::ostringstream log;
  CheckOptions o;
  o.skip_adjoint_scaling = true;
  EXPECT_THROW(cmd_check(o, log), ConfigError);
}

}  // namespace
}  // namespace frets
