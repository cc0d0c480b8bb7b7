#pragma once

// Two-stage univariate feature selection: a low-variance gate followed by
// keeping the k best features by the correlation F-score
//     f = r² / (1 - r²) · (n - 2).

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "stlf/stats.hpp"
#include "stlf/timeseries.hpp"

namespace stlf {

enum class Scaling { Raw, MinMax };

std::string_view to_string(Scaling s) noexcept;
Scaling parse_scaling(std::string_view text);

struct SelectionConfig {
  double variance_threshold = 0.1056;
  Eigen::Index k = 55;
  Scaling scaling = Scaling::Raw;

  void validate() const;
};

enum class DropStage { None, VarianceGate, TopK };

struct FeatureScore {
  std::string name;
  FeatureAspect aspect = FeatureAspect::Geographical;
  double variance = 0.0;
  double r = 0.0;        // 0 for gate-dropped features
  double f = 0.0;        // 0 for gate-dropped features, +inf when |r| = 1
  Eigen::Index rank = 0; // 1-based among gate survivors; 0 when gate-dropped
  bool kept = false;
  DropStage stage_dropped = DropStage::None;
};

struct SelectionReport {
  std::vector<FeatureScore> features;  // input column order
  Eigen::Index k_requested = 0;
  Eigen::Index survivors = 0;
  bool k_exceeds_survivors = false;

  std::vector<std::string> kept_names() const;  // rank order
  /// name,aspect,variance,r,f,rank,kept
  void write_csv(std::ostream& out) const;
};

/// Relative slack on the gate comparison so that a variance equal to the
/// threshold in exact arithmetic is not dropped by round-off.
inline constexpr double kVarianceGateSlack = 1e-12;

struct GateResult {
  std::vector<Eigen::Index> survivors;
  std::vector<Eigen::Index> dropped;
  Eigen::VectorXd variances;
};

/// Population variance of each column (after min-max scaling when requested);
/// a column is dropped when its variance is below the threshold.
GateResult variance_gate(const Eigen::MatrixXd& x, double threshold, Scaling scaling);

/// f = r²/(1-r²)·(n-2); |r| = 1 yields +inf. Throws for n <= 2.
double f_score(double r, Eigen::Index n);

/// Gate, score, rank (ties keep column order), keep the top min(k, survivors).
/// The returned matrix keeps the input column order.
std::pair<FeatureMatrix, SelectionReport> select_top_k(const FeatureMatrix& matrix, const SelectionConfig& config);

/// Scores every gate survivor against `y` without the top-k cut; used for
/// per-aspect rankings.
SelectionReport score_features(const FeatureMatrix& matrix, const SelectionConfig& config);

}  // namespace stlf
