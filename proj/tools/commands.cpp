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

#include "commands.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "frets/check_suite.hpp"
#include "frets/checkpoint.hpp"
#include "frets/errors.hpp"
#include "frets/fft.hpp"
#include "frets/inspect.hpp"
#include "frets/run_config.hpp"
#include "frets/training.hpp"

namespace frets::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Windows {
  WindowedDataset train;
  WindowedDataset val;
  WindowedDataset test;
};

Windows make_split_windows(const SeriesSplit& split, const MinMaxScaler& scaler,
                           const ModelConfig& m) {
  return {make_windows(scaler.apply(split.train), m.lookback, m.horizon),
          make_windows(scaler.apply(split.val), m.lookback, m.horizon),
          make_windows(scaler.apply(split.test), m.lookback, m.horizon)};
}

const WindowedDataset& pick(const Windows& w, const std::string& split) {
  if (split == "train") return w.train;
  if (split == "val") return w.val;
  if (split == "test") return w.test;
  throw ConfigError("--split must be train, val or test, got '" + split + "'");
}

json metrics_json(const Metrics& m) { return {{"mae", m.mae}, {"rmse", m.rmse}}; }

void write_json(const fs::path& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

// d x d (or 1 x d for a vector) matrix as CSV with a c0..c{d-1} header.
void write_matrix_csv(const RealTensor& m, const fs::path& path) {
  const RealTensor rows = m.rank() == 1 ? m.reshaped({1, m.size()}) : m;
  SeriesMatrix s{transpose(rows), {}};
  for (std::size_t j = 0; j < rows.dim(1); ++j) s.names.push_back("c" + std::to_string(j));
  write_csv(s, path);
}

json band_json(const BandSummary& b) {
  json j = {{"total_mass", b.total_mass}, {"degenerate", b.degenerate}};
  for (std::size_t i = 0; i < kBandWidths.size(); ++i)
    j["band_" + std::to_string(kBandWidths[i])] = b.fractions[i];
  return j;
}

void print_band(std::ostream& log, const char* label, const BandSummary& b) {
  log << "  " << label << ": mass " << fmt(b.total_mass);
  if (b.degenerate) {
    log << " (degenerate: all weights zero)\n";
    return;
  }
  for (std::size_t i = 0; i < kBandWidths.size(); ++i)
    log << "  band" << kBandWidths[i] << " " << fmt(b.fractions[i]);
  log << "\n";
}

}  // namespace

int cmd_train(const TrainOptions& o, std::ostream& log) {
  RunConfig rc = load_run_config(o.config);
  if (o.seed) rc.train.seed = rc.model.seed = *o.seed;
  const fs::path out = o.out.value_or(rc.output_dir);

  const SeriesMatrix series = ingest_csv(rc.dataset, rc.csv);
  rc.model.channels = series.channels();
  rc.model.validate();
  const ModelConfig& m = rc.model;
  const SeriesSplit split =
      chronological_split(series, rc.split, m.lookback + m.horizon);
  const MinMaxScaler scaler = MinMaxScaler::fit(split.train);
  const Windows w = make_split_windows(split, scaler, m);
  log << "data: " << rc.dataset.string() << " N=" << series.channels()
      << " T=" << series.length() << " windows train/val/test " << w.train.size() << "/"
      << w.val.size() << "/" << w.test.size() << "\n";

  const TrainResult result = train(m, w.train, w.val, rc.train, [&](const EpochRecord& r) {
    char line[160];
    std::snprintf(line, sizeof line,
                  "epoch %4zu  train_mse %.6e  val_mae %.6e  val_rmse %.6e  %.2fs\n",
                  r.epoch, r.train_loss, r.val.mae, r.val.rmse, r.wall_seconds);
    log << line << std::flush;
  });

  Checkpoint c;
  c.model = m;
  c.split = rc.split;
  c.csv = rc.csv;
  c.channel_names = series.names;
  c.scaler = scaler;
  c.params = result.params;
  c.summary = {result.log.size(), result.best_epoch, result.best_val};

  const Metrics test = evaluate(result.params, m, w.test, rc.train.eval_batch_size);
  fs::create_directories(out);
  save_checkpoint(c, out / kCheckpointFile);
  write_file_atomic(out / kEpochLogFile, format_epoch_log(result.log));
  write_json(out / "train_metrics.json",
             {{"best_epoch", result.best_epoch},
              {"epochs_run", result.log.size()},
              {"val", metrics_json(result.best_val)},
              {"test", metrics_json(test)}});
  log << "best epoch " << result.best_epoch << "  val_mae " << fmt(result.best_val.mae)
      << "  test_mae " << fmt(test.mae) << "  test_rmse " << fmt(test.rmse) << "\n";
  log << "wrote " << (out / kCheckpointFile).string() << "\n";
  return kExitOk;
}

int cmd_evaluate(const EvaluateOptions& o, std::ostream& log) {
  const Checkpoint c = load_checkpoint(o.checkpoint);
  fs::path dataset;
  if (o.data) dataset = *o.data;
  else if (o.config) dataset = load_run_config(*o.config).dataset;
  else throw ConfigError("evaluate needs --data PATH or --config PATH");

  const SeriesMatrix series = ingest_csv(dataset, c.csv);
  if (series.channels() != c.model.channels) {
    throw DimensionError("evaluate: checkpoint expects N=" +
                         std::to_string(c.model.channels) + " channels, dataset '" +
                         dataset.string() + "' has N=" + std::to_string(series.channels()));
  }
  const ModelConfig& m = c.model;
  const Windows w = make_split_windows(
      chronological_split(series, c.split, m.lookback + m.horizon), c.scaler, m);
  const Metrics metrics = evaluate(c.params, m, pick(w, o.split));
  log << o.split << " mae " << fmt(metrics.mae) << " rmse " << fmt(metrics.rmse) << "\n";
  if (o.out) {
    fs::create_directories(*o.out);
    write_json(*o.out / ("metrics_" + o.split + ".json"),
               {{"split", o.split}, {"metrics", metrics_json(metrics)}});
  }
  return kExitOk;
}

int cmd_predict(const PredictOptions& o, std::ostream& log) {
  const Checkpoint c = load_checkpoint(o.checkpoint);
  const SeriesMatrix input = ingest_csv(o.input, c.csv);
  const ModelConfig& m = c.model;
  if (input.length() != m.lookback) {
    throw DimensionError("predict: input has " + std::to_string(input.length()) +
                         " rows, checkpoint expects L=" + std::to_string(m.lookback));
  }
  if (input.channels() != m.channels) {
    throw DimensionError("predict: input has " + std::to_string(input.channels()) +
                         " columns, checkpoint expects N=" + std::to_string(m.channels));
  }
  const SeriesMatrix result{forecast(c, input.values), c.channel_names};
  fs::create_directories(o.out);
  write_csv(result, o.out / kForecastFile);
  log << "wrote " << m.horizon << " rows to " << (o.out / kForecastFile).string() << "\n";
  return kExitOk;
}

int cmd_check(const CheckOptions& o, std::ostream& log) {
#ifdef FRETS_FAULT_INJECTION
  fault::set_skip_adjoint_scaling(o.skip_adjoint_scaling);
#else
  if (o.skip_adjoint_scaling)
    throw ConfigError("fault injection is not compiled into this build");
#endif
  const auto results = check::run_all(o.seed);
  bool ok = true;
  for (const auto& r : results) {
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %s  max_error %.3e  tol %.1e  n %zu  %.2fs",
                  r.name.c_str(), r.passed ? "PASS" : "FAIL", r.max_error, r.tolerance,
                  r.instances, r.seconds);
    log << line;
    if (!r.passed) log << "  failing instance seed " << r.worst_seed;
    log << "\n";
    ok = ok && r.passed;
  }
  if (!ok) {
    for (const auto& r : results) {
      if (!r.passed) {
        log << "property failure: " << r.name << " (instance seed " << r.worst_seed
            << "): " << r.detail << "\n";
      }
    }
    return kExitProperty;
  }
  log << "all " << results.size() << " suites passed\n";
  return kExitOk;
}

int cmd_inspect_weights(const InspectOptions& o, std::ostream& log) {
  if (o.which != "channel" && o.which != "temporal")
    throw ConfigError("--which must be channel or temporal, got '" + o.which + "'");
  const Checkpoint c = load_checkpoint(o.checkpoint);
  const auto& layers = o.which == "channel" ? c.params.channel : c.params.temporal;
  if (layers.empty()) {
    throw ConfigError("inspect-weights: checkpoint has no frequency-domain " + o.which +
                      " learner");
  }
  if (o.layer >= layers.size()) {
    throw ConfigError("inspect-weights: layer " + std::to_string(o.layer) +
                      " out of range, checkpoint has " + std::to_string(layers.size()));
  }
  const FreMLPParams& p = layers[o.layer];
  fs::create_directories(o.out);
  const std::string stem = o.which + "_" + std::to_string(o.layer) + "_";
  write_matrix_csv(p.w_re, o.out / (stem + "w_re.csv"));
  write_matrix_csv(p.w_im, o.out / (stem + "w_im.csv"));
  write_matrix_csv(p.b_re, o.out / (stem + "b_re.csv"));
  write_matrix_csv(p.b_im, o.out / (stem + "b_im.csv"));

  const BandSummary magnitude = band_summary(p.w_re, p.w_im);
  const BandSummary real = band_summary(p.w_re);
  const BandSummary imag = band_summary(p.w_im);
  write_json(o.out / (stem + kBandSummaryFile),
             {{"learner", o.which},
              {"layer", o.layer},
              {"d", p.dim()},
              {"magnitude", band_json(magnitude)},
              {"real", band_json(real)},
              {"imag", band_json(imag)}});
  log << o.which << " learner, layer " << o.layer << ", d=" << p.dim() << "\n";
  print_band(log, "|W|^2", magnitude);
  print_band(log, "W_r^2", real);
  print_band(log, "W_i^2", imag);
  return kExitOk;
}

int cmd_synth(const SynthOptions& o, std::ostream& log) {
  SynthFileSpec s = load_synth_spec(o.spec);
  if (o.seed) s.spec.seed = *o.seed;
  const SeriesMatrix series = synth_sinusoids(s.spec);
  fs::create_directories(o.out);
  write_csv(series, o.out / s.file);
  log << "wrote " << series.channels() << " channels x " << series.length()
      << " rows to " << (o.out / s.file).string() << "\n";
  return kExitOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const IngestionError*>(&e) ||
      dynamic_cast<const fs::filesystem_error*>(&e))
    return kExitIo;
  if (dynamic_cast<const DimensionError*>(&e)) return kExitShape;
  if (dynamic_cast<const TrainingError*>(&e)) return kExitNumeric;
  return kExitUnexpected;
}

}  // namespace frets::cli
