#pragma once

// Batch run configuration. One JSON file describes a whole run; relative paths
// resolve against the file's directory. Unknown keys are rejected.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stlf/astro.hpp"
#include "stlf/evaluation.hpp"
#include "stlf/interpret.hpp"
#include "stlf/models/grid_search.hpp"
#include "stlf/models/model.hpp"
#include "stlf/selection.hpp"
#include "stlf/synth.hpp"
#include "stlf/timeseries.hpp"

namespace stlf::cli {

namespace fs = std::filesystem;

struct DataConfig {
  fs::path load;
  Frequency frequency = Frequency::DailyPeak;
  fs::path weather;
  std::vector<std::string> weather_columns;  // required columns; empty accepts any
  Eigen::Index max_gap = 3;
  fs::path holidays;
  fs::path tides;
  fs::path ghi_profile;
};

struct ModelEntry {
  ModelConfig config;
  ParamGrid grid;  // empty: train with `config` as given
  int folds = 5;
  fs::path file;   // model file; defaults to <output>/model_<kind>.json
};

enum class ProtocolKind { DateSplit, Holdout, RepeatedRuns };

std::string_view to_string(ProtocolKind kind) noexcept;

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::Holdout;
  std::optional<Date> cutoff;  // required for date_split and repeated_runs
  double fraction = 0.2;
  int iterations = 30;
  int runs = 30;
};

struct PdpConfig {
  std::vector<std::string> features{"temp_max_f"};
  std::vector<std::string> inputs;  // model input selectors; empty uses LV-KB
  std::optional<ModelKind> model;   // defaults to gbrt when configured, else the first model
  PdpGridSpec grid;
};

struct RankConfig {
  std::vector<std::string> features;  // selectors; empty ranks every G, A and S column
};

struct LagScanConfig {
  std::string feature = "ckghi";
  Eigen::Index max_lag = 80;
};

struct RunConfig {
  fs::path source;  // the config file, empty when built in code
  std::uint64_t seed = 1;
  int jobs = 1;
  fs::path output = "out";
  DataConfig data;
  fs::path catalog;
  SelectionConfig selection;
  std::vector<ModelEntry> models;
  ProtocolConfig protocol;
  std::vector<ScenarioSpec> scenarios;
  bool groups = true;
  std::array<Eigen::Index, 3> group_sizes{10, 10, 7};
  PdpConfig pdp;
  RankConfig rank;
  LagScanConfig lagscan;
  SynthConfig synth;
  GeoLocation synth_location = default_synth_location();

  /// The parsed document as JSON text; seed and output reflect overrides.
  std::string document;

  fs::path model_file(const ModelEntry& entry) const;
};

/// Throws ConfigError naming the offending key.
RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir = {});
RunConfig load_run_config(const fs::path& path);

/// Applies command-line overrides and refreshes `document`.
void override_seed(RunConfig& config, std::uint64_t seed);
void override_output(RunConfig& config, const fs::path& output);

}  // namespace stlf::cli
