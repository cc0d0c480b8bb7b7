#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stlf/models/model.hpp"

namespace stlf {

struct GridAxis {
  std::string parameter;  // a numeric config key, e.g. "c" or "max_depth"
  std::vector<double> values;
};

/// Points are enumerated lexicographically with the first axis varying slowest.
struct ParamGrid {
  std::vector<GridAxis> axes;

  std::size_t size() const;
  std::vector<double> point(std::size_t index) const;
  void validate() const;
};

/// Sets one numeric parameter on a config; unknown names are a ConfigError.
void apply_param(ModelConfig& config, const std::string& name, double value);

struct GridRow {
  std::vector<double> values;  // one per axis
  double mean_mape = 0.0;
};

struct GridSearchResult {
  ModelConfig best;
  std::size_t best_index = 0;
  std::vector<std::string> parameters;
  std::vector<GridRow> table;  // lattice order

  void write_csv(std::ostream& out) const;
};

/// Scores each lattice point by mean MAPE over seeded k folds and returns the
/// lowest; the earliest point wins ties.
GridSearchResult grid_search(const ModelConfig& base, const ParamGrid& grid, const Eigen::MatrixXd& x,
                             const Eigen::VectorXd& y, int folds, std::uint64_t seed, int jobs = 1);

}  // namespace stlf
