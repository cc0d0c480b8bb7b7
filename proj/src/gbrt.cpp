#include "stlf/models/gbrt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stlf/error.hpp"

namespace stlf {

void GbrtConfig::validate() const {
  if (n_trees < 0) throw ParameterError("gbrt: n_trees must be non-negative");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw ParameterError("gbrt: learning_rate must be in (0, 1]");
  if (max_depth < 1) throw ParameterError("gbrt: max_depth must be at least 1");
  if (min_samples_leaf < 1) throw ParameterError("gbrt: min_samples_leaf must be at least 1");
}

namespace {

struct Split {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

// Per-node accumulator while walking one feature's sorted order.
struct Scan {
  Eigen::Index count = 0;
  double sum = 0.0;
  double last = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& x, const std::vector<std::vector<Eigen::Index>>& sorted, int max_depth,
              int min_leaf)
      : x_(x), sorted_(sorted), max_depth_(max_depth), min_leaf_(min_leaf) {}

  RegressionTree build(const Eigen::VectorXd& r) {
    const Eigen::Index n = x_.rows();
    RegressionTree tree;
    tree.nodes.push_back({});
    std::vector<int> node_of(static_cast<std::size_t>(n), 0);
    std::vector<int> frontier{0};
    std::vector<Eigen::Index> count{n};
    std::vector<double> sum{r.sum()};

    for (int depth = 0; depth < max_depth_ && !frontier.empty(); ++depth) {
      // slot[node] = position in frontier, or -1
      std::vector<int> slot(tree.nodes.size(), -1);
      for (std::size_t s = 0; s < frontier.size(); ++s) slot[static_cast<std::size_t>(frontier[s])] = static_cast<int>(s);
      std::vector<Split> best(frontier.size());

      for (Eigen::Index f = 0; f < x_.cols(); ++f) {
        std::vector<Scan> scan(frontier.size());
        for (Eigen::Index i : sorted_[static_cast<std::size_t>(f)]) {
          const int s = slot[static_cast<std::size_t>(node_of[static_cast<std::size_t>(i)])];
          if (s < 0) continue;
          Scan& sc = scan[static_cast<std::size_t>(s)];
          const double v = x_(i, f);
          if (sc.count > 0 && v > sc.last) consider(sc, best[static_cast<std::size_t>(s)], count[static_cast<std::size_t>(s)],
                                                    sum[static_cast<std::size_t>(s)], static_cast<int>(f), v);
          sc.count += 1;
          sc.sum += r(i);
          sc.last = v;
        }
      }

      std::vector<int> next;
      std::vector<Eigen::Index> next_count;
      std::vector<double> next_sum;
      std::vector<int> left_of(tree.nodes.size(), -1);
      for (std::size_t s = 0; s < frontier.size(); ++s) {
        if (best[s].feature < 0) continue;
        const int node = frontier[s];
        const int l = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes.push_back({});
        tree.nodes[static_cast<std::size_t>(node)].feature = best[s].feature;
        tree.nodes[static_cast<std::size_t>(node)].threshold = best[s].threshold;
        tree.nodes[static_cast<std::size_t>(node)].left = l;
        tree.nodes[static_cast<std::size_t>(node)].right = l + 1;
        left_of[static_cast<std::size_t>(node)] = l;
        next.push_back(l);
        next.push_back(l + 1);
        next_count.push_back(0);
        next_count.push_back(0);
        next_sum.push_back(0.0);
        next_sum.push_back(0.0);
      }
      if (next.empty()) break;
      std::vector<int> next_slot(tree.nodes.size(), -1);
      for (std::size_t s = 0; s < next.size(); ++s) next_slot[static_cast<std::size_t>(next[s])] = static_cast<int>(s);
      for (Eigen::Index i = 0; i < n; ++i) {
        const int node = node_of[static_cast<std::size_t>(i)];
        const int l = left_of[static_cast<std::size_t>(node)];
        if (l < 0) continue;
        const auto& nd = tree.nodes[static_cast<std::size_t>(node)];
        const int child = x_(i, nd.feature) <= nd.threshold ? l : l + 1;
        node_of[static_cast<std::size_t>(i)] = child;
        const auto s = static_cast<std::size_t>(next_slot[static_cast<std::size_t>(child)]);
        next_count[s] += 1;
        next_sum[s] += r(i);
      }
      frontier = std::move(next);
      count = std::move(next_count);
      sum = std::move(next_sum);
    }

    // Leaf values are the mean residual of the rows that land there.
    std::vector<double> leaf_sum(tree.nodes.size(), 0.0);
    std::vector<Eigen::Index> leaf_count(tree.nodes.size(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(node_of[static_cast<std::size_t>(i)]);
      leaf_sum[k] += r(i);
      leaf_count[k] += 1;
    }
    for (std::size_t k = 0; k < tree.nodes.size(); ++k)
      if (tree.nodes[k].feature < 0 && leaf_count[k] > 0) tree.nodes[k].value = leaf_sum[k] / static_cast<double>(leaf_count[k]);
    return tree;
  }

 private:
  void consider(const Scan& left, Split& best, Eigen::Index n, double total, int feature, double next_value) const {
    const Eigen::Index nl = left.count, nr = n - left.count;
    if (nl < min_leaf_ || nr < min_leaf_) return;
    const double sl = left.sum, sr = total - left.sum;
    const double gain = sl * sl / static_cast<double>(nl) + sr * sr / static_cast<double>(nr) -
                        total * total / static_cast<double>(n);
    if (gain > best.gain) {
      double thr = left.last + (next_value - left.last) / 2.0;
      if (!(thr < next_value)) thr = left.last;
      best = {gain, feature, thr};
    }
  }

  const Eigen::MatrixXd& x_;
  const std::vector<std::vector<Eigen::Index>>& sorted_;
  int max_depth_;
  Eigen::Index min_leaf_;
};

}  // namespace

BoostedTrees fit_boosted_trees(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GbrtConfig& config,
                               TrainingInfo* info) {
  config.validate();
  if (x.rows() != y.size()) throw ParameterError("gbrt: X and y have different row counts");
  if (x.rows() < 2) throw TrainingError("gbrt: need at least two rows");
  if (!x.allFinite() || !y.allFinite()) throw TrainingError("gbrt: non-finite training data");

  const Eigen::Index n = x.rows();
  std::vector<std::vector<Eigen::Index>> sorted(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index f = 0; f < x.cols(); ++f) {
    auto& idx = sorted[static_cast<std::size_t>(f)];
    idx.resize(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return x(a, f) < x(b, f); });
  }

  BoostedTrees m;
  m.n_features = x.cols();
  m.base = y.mean();
  m.learning_rate = config.learning_rate;
  Eigen::VectorXd pred = Eigen::VectorXd::Constant(n, m.base);
  TrainingInfo local;
  auto mse = [&] { return (y - pred).squaredNorm() / static_cast<double>(n); };
  local.loss_history.push_back(mse());

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor rows = x;
  TreeBuilder builder(x, sorted, config.max_depth, config.min_samples_leaf);
  for (int t = 0; t < config.n_trees; ++t) {
    const Eigen::VectorXd resid = y - pred;
    RegressionTree tree = builder.build(resid);
    for (Eigen::Index i = 0; i < n; ++i) pred(i) += m.learning_rate * tree.evaluate(rows.data() + i * rows.cols());
    m.trees.push_back(std::move(tree));
    local.loss_history.push_back(mse());
  }
  local.initial_loss = local.loss_history.front();
  local.final_loss = local.loss_history.back();
  local.iterations = config.n_trees;
  local.converged = true;
  if (info) *info = std::move(local);
  return m;
}

}  // namespace stlf
