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

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "frets/runtime.hpp"

using namespace frets::cli;

int main(int argc, char** argv) {
  frets::configure_allocator();

  CLI::App app{"FreTS: frequency-domain MLP forecaster"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Seed override for train, check and synth");

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train a model from a run config");
  train_cmd->add_option("--config", train.config, "Run config (JSON)")->required();
  train_cmd->add_option("--out", train.out, "Output directory (overrides output_dir)");

  EvaluateOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "MAE/RMSE of a checkpoint on one split");
  eval_cmd->add_option("--checkpoint", eval.checkpoint)->required();
  eval_cmd->add_option("--split", eval.split)->check(CLI::IsMember({"train", "val", "test"}));
  eval_cmd->add_option("--data", eval.data, "Dataset CSV");
  eval_cmd->add_option("--config", eval.config, "Run config naming the dataset");
  eval_cmd->add_option("--out", eval.out, "Directory for metrics_<split>.json");

  PredictOptions predict;
  auto* predict_cmd = app.add_subcommand("predict", "Forecast from the last L rows");
  predict_cmd->add_option("--checkpoint", predict.checkpoint)->required();
  predict_cmd->add_option("--input", predict.input, "CSV with exactly L rows")->required();
  predict_cmd->add_option("--out", predict.out, "Directory for forecast.csv");

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Run the built-in property suites");
#ifdef FRETS_FAULT_INJECTION
  check_cmd->add_flag("--skip-adjoint-scaling", check.skip_adjoint_scaling,
                      "Inject the adjoint-scaling fault");
#endif

  InspectOptions inspect;
  auto* inspect_cmd =
      app.add_subcommand("inspect-weights", "Export FreMLP weights and band summary");
  inspect_cmd->add_option("--checkpoint", inspect.checkpoint)->required();
  inspect_cmd->add_option("--which", inspect.which)
      ->check(CLI::IsMember({"channel", "temporal"}));
  inspect_cmd->add_option("--layer", inspect.layer);
  inspect_cmd->add_option("--out", inspect.out);

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic sinusoid dataset");
  synth_cmd->add_option("--config", synth.spec, "Generator spec (JSON)")->required();
  synth_cmd->add_option("--out", synth.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*train_cmd) {
      train.seed = seed;
      return cmd_train(train, std::cout);
    }
    if (*eval_cmd) return cmd_evaluate(eval, std::cout);
    if (*predict_cmd) return cmd_predict(predict, std::cout);
    if (*check_cmd) {
      check.seed = seed.value_or(0);
      return cmd_check(check, std::cout);
    }
    if (*inspect_cmd) return cmd_inspect_weights(inspect, std::cout);
    if (*synth_cmd) {
      synth.seed = seed;
      return cmd_synth(synth, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "frets: error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitUnexpected;
}
