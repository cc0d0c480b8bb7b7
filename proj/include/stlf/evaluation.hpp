#pragma once

// Experiment protocols: single scenario runs, repeated runs over seeds and
// repeated random holdouts.

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "stlf/metrics.hpp"
#include "stlf/models/model.hpp"
#include "stlf/selection.hpp"
#include "stlf/timeseries.hpp"

namespace stlf {

/// Candidate selectors: "@G", "@A", "@S", "@L" (by aspect), "@all", "prefix*"
/// or an exact column name.
struct ScenarioSpec {
  std::string name;
  std::vector<std::string> candidates;
  Eigen::Index k = 0;
};

/// Matching column names in matrix order, without repeats. A selector that
/// matches nothing is a ConfigError.
std::vector<std::string> resolve_selectors(const FeatureMatrix& matrix, std::span<const std::string> selectors);

/// S1: lags + day index (k 8); S2: S1 + temperature, dew point and the social
/// features (k 15); S3: S2 + nine more weather features (k 20); S4: every
/// candidate (k 55).
const std::vector<ScenarioSpec>& default_scenarios();
/// Unknown names are a ConfigError.
const ScenarioSpec& find_scenario(std::string_view name);

DatasetSplit apply_split(const FeatureMatrix& matrix, const SplitRule& rule);

struct ModelRun {
  ModelKind kind = ModelKind::Svr;
  MetricReport metrics;
  double seconds = 0.0;  // wall clock for train + predict
  TrainingInfo info;
};

struct ScenarioRun {
  std::string scenario;
  std::uint64_t seed = 0;
  Eigen::Index candidates = 0;
  Eigen::Index k_requested = 0;
  bool k_exceeds_candidates = false;
  std::vector<std::string> selected;  // rank order
  SelectionReport report;
  std::vector<ModelRun> models;
};

/// Resolves the candidates, splits, fits LV-KB on the training part only,
/// trains every model (seeded with `seed`) and scores the test part.
ScenarioRun run_scenario(const ScenarioSpec& spec, const FeatureMatrix& candidates, std::span<const ModelConfig> models,
                         const SplitRule& split, const SelectionConfig& selection, std::uint64_t seed, int jobs = 1);

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // population
};

struct ExperimentRow {
  std::string scenario;
  ModelKind model = ModelKind::Svr;
  Eigen::Index k = 0;
  MetricSummary mae, mape, rmse, seconds;
};

struct ExperimentResult {
  std::string protocol;  // "repeated_runs" or "holdout"
  int runs = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<ExperimentRow> rows;
  std::vector<ScenarioRun> details;  // every run, scenario-major then seed

  /// scenario,model,k,metric,mean,std,runs; timing rows only when requested.
  void write_csv(std::ostream& out, bool timing = false) const;
  std::string to_json(bool timing = false) const;
};

struct ExperimentSetup {
  std::vector<ScenarioSpec> scenarios;
  std::vector<ModelConfig> models;
  SelectionConfig selection;
  SplitRule split;
};

/// Seeds 1..runs re-seed the models; the split stays fixed.
ExperimentResult repeated_runs(const FeatureMatrix& candidates, const ExperimentSetup& setup, int runs = 30,
                               int jobs = 1);

/// Iteration s uses random_holdout(fraction, seed s) and model seed s.
ExperimentResult holdout_iterations(const FeatureMatrix& candidates, const ExperimentSetup& setup,
                                    double fraction = 0.2, int iterations = 30, int jobs = 1);

std::string metric_report_json(const MetricReport& report);

}  // namespace stlf
