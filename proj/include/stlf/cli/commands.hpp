#pragma once

// Subcommands of the `stlf` batch tool. Each one reads a RunConfig, writes its
// outputs plus a copy of the config into `config.output`, and touches nothing
// else. Outputs depend only on the config and seed.

#include <iosfwd>
#include <string_view>

#include "stlf/cli/run_config.hpp"

namespace stlf::cli {

struct CommandOptions {
  bool timing = false;  // include wall-clock columns, which break byte-identity
};

/// ingest_report.json: row counts, spans, interpolation notes, candidate counts.
void cmd_ingest_check(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// selection.csv and selected.txt, fitted on the training part of the split.
void cmd_select(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// model_<kind>.json per model (plus grid_<kind>.csv when a grid is given).
void cmd_train(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// predictions_<kind>.csv (timestamp,actual,predicted) and metrics_<kind>.json
/// on the test part, from previously trained model files.
void cmd_forecast(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// date_split: metrics.json for the trained models. holdout and repeated_runs:
/// summary.csv / summary.json over iterations with LV-KB on every candidate.
void cmd_evaluate(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// scenarios.csv (+ scenarios.json for multi-run protocols) and groups.csv.
void cmd_scenario(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// pdp_<feature>.csv per feature and balance_points.csv.
void cmd_pdp(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// rank.csv: single-feature additions to the load lags.
void cmd_rank(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// lagscan.csv and best_lag.txt.
void cmd_lagscan(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// load.csv, weather.csv, holidays.csv and truth.json.
void cmd_synth(const RunConfig& config, const CommandOptions& options, std::ostream& log);

/// Full command line. Exit codes: 0 success, 2 configuration or validation
/// error, 1 runtime error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stlf::cli
