#include "stlf/models/grid_search.hpp"

#include <cmath>
#include <limits>

#include "stlf/error.hpp"
#include "stlf/format.hpp"
#include "stlf/metrics.hpp"
#include "stlf/parallel.hpp"
#include "stlf/random.hpp"

namespace stlf {

std::size_t ParamGrid::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

std::vector<double> ParamGrid::point(std::size_t index) const {
  std::vector<double> out(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    const std::size_t len = axes[a].values.size();
    out[a] = axes[a].values[index % len];
    index /= len;
  }
  return out;
}

void ParamGrid::validate() const {
  for (const auto& a : axes)
    if (a.values.empty()) throw ConfigError("grid axis '" + a.parameter + "' has no values");
}

namespace {

template <typename T>
void set_integer(T& field, const std::string& name, double value) {
  if (value != std::floor(value)) throw ConfigError("grid parameter '" + name + "' must be an integer");
  field = static_cast<T>(value);
}

}  // namespace

void apply_param(ModelConfig& config, const std::string& name, double value) {
  bool known = false;
  if (auto* c = std::get_if<SvrConfig>(&config)) {
    if (name == "c") c->c = value, known = true;
    else if (name == "epsilon") c->epsilon = value, known = true;
    else if (name == "max_iters") set_integer(c->max_iters, name, value), known = true;
    else if (name == "tolerance") c->tolerance = value, known = true;
  } else if (auto* g = std::get_if<GbrtConfig>(&config)) {
    if (name == "n_trees") set_integer(g->n_trees, name, value), known = true;
    else if (name == "learning_rate") g->learning_rate = value, known = true;
    else if (name == "max_depth") set_integer(g->max_depth, name, value), known = true;
    else if (name == "min_samples_leaf") set_integer(g->min_samples_leaf, name, value), known = true;
  } else if (auto* m = std::get_if<MlpConfig>(&config)) {
    if (name == "l2_weight") m->l2_weight = value, known = true;
    else if (name == "max_iters") set_integer(m->max_iters, name, value), known = true;
    else if (name == "tolerance") m->tolerance = value, known = true;
  }
  if (!known)
    throw ConfigError("'" + name + "' is not a grid-searchable " + std::string(to_string(kind_of(config))) +
                      " parameter");
}

void GridSearchResult::write_csv(std::ostream& out) const {
  for (const auto& p : parameters) out << p << ',';
  out << "mean_mape,best\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (double v : table[i].values) out << format_double(v) << ',';
    out << format_double(table[i].mean_mape) << ',' << (i == best_index ? 1 : 0) << '\n';
  }
}

GridSearchResult grid_search(const ModelConfig& base, const ParamGrid& grid, const Eigen::MatrixXd& x,
                             const Eigen::VectorXd& y, int folds, std::uint64_t seed, int jobs) {
  grid.validate();
  if (folds < 2) throw ParameterError("grid search needs at least two folds");
  if (x.rows() != y.size()) throw ParameterError("grid search: X and y have different row counts");
  if (x.rows() < 2 * folds) throw ParameterError("grid search: too few rows for the requested folds");

  const std::size_t points = grid.size();
  std::vector<ModelConfig> configs(points, base);
  GridSearchResult res;
  res.table.resize(points);
  for (const auto& a : grid.axes) res.parameters.push_back(a.parameter);
  for (std::size_t i = 0; i < points; ++i) {
    res.table[i].values = grid.point(i);
    for (std::size_t a = 0; a < grid.axes.size(); ++a) apply_param(configs[i], grid.axes[a].parameter, res.table[i].values[a]);
    validate(configs[i]);
  }

  // Fold f holds the rows at permutation positions [f*n/k, (f+1)*n/k).
  const Eigen::Index n = x.rows();
  const auto order = seeded_permutation(n, seed);
  std::vector<std::vector<Eigen::Index>> test_rows(static_cast<std::size_t>(folds)), train_rows(static_cast<std::size_t>(folds));
  for (int f = 0; f < folds; ++f) {
    const Eigen::Index lo = n * f / folds, hi = n * (f + 1) / folds;
    for (Eigen::Index pos = 0; pos < n; ++pos)
      (pos >= lo && pos < hi ? test_rows : train_rows)[static_cast<std::size_t>(f)].push_back(order[static_cast<std::size_t>(pos)]);
    std::sort(test_rows[static_cast<std::size_t>(f)].begin(), test_rows[static_cast<std::size_t>(f)].end());
    std::sort(train_rows[static_cast<std::size_t>(f)].begin(), train_rows[static_cast<std::size_t>(f)].end());
  }

  parallel_for(points, jobs, [&](std::size_t i) {
    double total = 0.0;
    for (int f = 0; f < folds; ++f) {
      const auto& tr = train_rows[static_cast<std::size_t>(f)];
      const auto& te = test_rows[static_cast<std::size_t>(f)];
      const TrainedModel model = train_model(configs[i], x(tr, Eigen::all), y(tr));
      total += mape(y(te), model.predict(x(te, Eigen::all)));
    }
    res.table[i].mean_mape = total / folds;
  });

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    if (res.table[i].mean_mape < best) {
      best = res.table[i].mean_mape;
      res.best_index = i;
    }
  }
  res.best = configs[res.best_index];
  return res;
}

}  // namespace stlf
