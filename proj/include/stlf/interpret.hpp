#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stlf/models/model.hpp"
#include "stlf/selection.hpp"
#include "stlf/timeseries.hpp"

namespace stlf {

// ---- partial dependence ----

struct PdpGridSpec {
  Eigen::Index points = 50;
  double lower_percentile = 1.0;
  double upper_percentile = 99.0;
};

struct PdpCurve {
  std::string feature;
  Eigen::VectorXd grid;      // strictly ascending
  Eigen::VectorXd response;  // mean prediction at each grid value

  /// grid,response
  void write_csv(std::ostream& out) const;
};

/// Evenly spaced values between two percentiles of `column`; collapses to a
/// single point when they coincide.
Eigen::VectorXd pdp_grid(const Eigen::VectorXd& column, const PdpGridSpec& spec = {});

/// For each grid value v: set column j of every row to v and average the
/// model's predictions.
PdpCurve partial_dependence(const TrainedModel& model, const Eigen::MatrixXd& x, Eigen::Index j,
                            const Eigen::VectorXd& grid);
/// Looks the feature up by name among the model's inputs.
PdpCurve partial_dependence(const TrainedModel& model, const FeatureMatrix& train, std::string_view feature,
                            const PdpGridSpec& spec = {});

struct BalancePoint {
  double value = 0.0;
  double response = 0.0;
  Eigen::Index index = 0;
  bool v_shaped = false;  // false when the minimum sits on an endpoint
};

/// Grid value with the lowest response; the first such value on ties.
BalancePoint balance_point(const PdpCurve& curve);

// ---- feature-group experiments ----

struct AspectGroup {
  FeatureAspect aspect = FeatureAspect::Geographical;
  std::vector<std::string> features;
};

/// The `counts` best features of each aspect by F-score on `train`, as three
/// groups in G, A, S order.
std::vector<AspectGroup> top_features_by_aspect(const FeatureMatrix& train, const SelectionConfig& selection,
                                                std::array<Eigen::Index, 3> counts = {10, 10, 7});

struct FeatureRankRow {
  std::string feature;  // empty for the lags-only baseline
  FeatureAspect aspect = FeatureAspect::HistoricalLoad;
  std::vector<double> mape;  // one per model
};

struct RankTable {
  std::vector<ModelKind> models;
  std::vector<FeatureRankRow> rows;  // baseline first, then by mean MAPE ascending

  /// feature,aspect,<model>_mape...; the baseline feature is written as "none".
  void write_csv(std::ostream& out) const;
};

/// Trains every model on {feature} plus the L-aspect columns and scores MAPE on
/// the test part of `split`.
RankTable rank_single_features(const FeatureMatrix& candidates, std::span<const std::string> features,
                               std::span<const ModelConfig> models, const SplitRule& split, std::uint64_t seed,
                               int jobs = 1);

struct GroupExperimentRow {
  std::string combo;  // G, A, S, G+A, G+S, A+S, MSF
  std::vector<std::string> features;
  std::vector<double> mape;  // one per model
};

struct GroupTable {
  std::vector<ModelKind> models;
  std::vector<GroupExperimentRow> rows;

  /// combo,<model>_mape...
  void write_csv(std::ostream& out) const;
};

inline constexpr const char* kGroupCombos[] = {"G", "A", "S", "G+A", "G+S", "A+S", "MSF"};

/// Requires exactly one group for each of G, A and S. Every combination is
/// trained together with the L-aspect columns.
GroupTable group_experiment(const FeatureMatrix& candidates, std::span<const AspectGroup> groups,
                            std::span<const ModelConfig> models, const SplitRule& split, std::uint64_t seed,
                            int jobs = 1);

// ---- lag correlation ----

struct LagScan {
  std::vector<double> r;  // r[d] = corr(load[t], feature[t - d])
  Eigen::Index best_lag = 0;
  double best_r = 0.0;

  /// lag,r
  void write_csv(std::ostream& out) const;
};

/// Best lag maximises |r|; ties go to the smaller lag.
LagScan lag_correlation_scan(const Eigen::VectorXd& feature, const Eigen::VectorXd& load, Eigen::Index max_lag);

}  // namespace stlf
