#pragma once

// Least-squares gradient boosting with depth-limited regression trees.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "stlf/models/training_info.hpp"

namespace stlf {

struct GbrtConfig {
  int n_trees = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
  int min_samples_leaf = 1;
  std::uint64_t seed = 0;  // recorded; training draws no random numbers

  void validate() const;
};

struct RegressionTree {
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };
  std::vector<Node> nodes;  // nodes[0] is the root

  /// `row` points at the feature values of one sample.
  double evaluate(const double* row) const {
    int k = 0;
    while (nodes[static_cast<std::size_t>(k)].feature >= 0) {
      const Node& nd = nodes[static_cast<std::size_t>(k)];
      k = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(k)].value;
  }
};

struct BoostedTrees {
  Eigen::Index n_features = 0;
  double base = 0.0;
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;
};

/// Stage 0 predicts mean(y); each later stage fits residuals. Splits are exact
/// greedy on sorted values with midpoint thresholds; equal gains keep the
/// lower feature index, then the lower threshold. `info->loss_history` holds
/// the training MSE after every stage.
BoostedTrees fit_boosted_trees(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GbrtConfig& config,
                               TrainingInfo* info = nullptr);

template <typename Derived>
Eigen::VectorXd predict(const BoostedTrees& m, const Eigen::MatrixBase<Derived>& x) {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor rows = x;
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double* row = rows.data() + i * rows.cols();
    double s = m.base;
    for (const auto& tree : m.trees) s += m.learning_rate * tree.evaluate(row);
    out(i) = s;
  }
  return out;
}

}  // namespace stlf
