#include "stlf/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stlf/error.hpp"
#include "stlf/evaluation.hpp"
#include "stlf/format.hpp"
#include "stlf/parallel.hpp"
#include "stlf/stats.hpp"

namespace stlf {

// ---- partial dependence ----

void PdpCurve::write_csv(std::ostream& out) const {
  out << "grid,response\n";
  for (Eigen::Index i = 0; i < grid.size(); ++i) out << format_double(grid(i)) << ',' << format_double(response(i)) << '\n';
}

Eigen::VectorXd pdp_grid(const Eigen::VectorXd& column, const PdpGridSpec& spec) {
  if (spec.points < 2) throw ParameterError("pdp grid needs at least two points");
  if (!(spec.lower_percentile >= 0.0 && spec.lower_percentile < spec.upper_percentile && spec.upper_percentile <= 100.0))
    throw ParameterError("pdp percentiles must satisfy 0 <= lower < upper <= 100");
  const double lo = percentile(column, spec.lower_percentile);
  const double hi = percentile(column, spec.upper_percentile);
  if (!(hi > lo)) return Eigen::VectorXd::Constant(1, lo);
  Eigen::VectorXd g = Eigen::VectorXd::LinSpaced(spec.points, lo, hi);
  g(spec.points - 1) = hi;
  return g;
}

PdpCurve partial_dependence(const TrainedModel& model, const Eigen::MatrixXd& x, Eigen::Index j,
                            const Eigen::VectorXd& grid) {
  if (j < 0 || j >= x.cols()) throw ParameterError("pdp: feature index out of range");
  if (x.rows() == 0) throw ParameterError("pdp: no rows");
  for (Eigen::Index i = 1; i < grid.size(); ++i)
    if (!(grid(i) > grid(i - 1))) throw ParameterError("pdp: grid must be strictly ascending");
  PdpCurve curve;
  curve.feature = model.features()[static_cast<std::size_t>(j)];
  curve.grid = grid;
  curve.response.resize(grid.size());
  Eigen::MatrixXd work = x;
  for (Eigen::Index g = 0; g < grid.size(); ++g) {
    work.col(j).setConstant(grid(g));
    curve.response(g) = model.predict(work).mean();
  }
  return curve;
}

PdpCurve partial_dependence(const TrainedModel& model, const FeatureMatrix& train, std::string_view feature,
                            const PdpGridSpec& spec) {
  const auto& names = model.features();
  const auto it = std::find(names.begin(), names.end(), feature);
  if (it == names.end()) throw ParameterError("pdp: '" + std::string(feature) + "' is not an input of the model");
  const Eigen::Index j = it - names.begin();
  const Eigen::Index col = train.index_of(feature);
  if (col != j) throw SchemaError("pdp: training matrix columns are not in model order");
  return partial_dependence(model, train.values(), j, pdp_grid(train.values().col(j), spec));
}

BalancePoint balance_point(const PdpCurve& curve) {
  if (curve.grid.size() < 3 || curve.response.size() != curve.grid.size())
    throw ParameterError("balance point needs a curve of at least three points");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < curve.response.size(); ++i)
    if (curve.response(i) < curve.response(best)) best = i;
  return {curve.grid(best), curve.response(best), best, best > 0 && best < curve.grid.size() - 1};
}

// ---- feature-group experiments ----

std::vector<AspectGroup> top_features_by_aspect(const FeatureMatrix& train, const SelectionConfig& selection,
                                                std::array<Eigen::Index, 3> counts) {
  const SelectionReport report = score_features(train, selection);
  std::vector<const FeatureScore*> ranked;
  for (const auto& f : report.features)
    if (f.rank > 0) ranked.push_back(&f);
  std::sort(ranked.begin(), ranked.end(), [](const FeatureScore* a, const FeatureScore* b) { return a->rank < b->rank; });
  std::vector<AspectGroup> out;
  const FeatureAspect aspects[] = {FeatureAspect::Geographical, FeatureAspect::Astronomical, FeatureAspect::Social};
  for (std::size_t a = 0; a < 3; ++a) {
    AspectGroup g{aspects[a], {}};
    for (const auto* f : ranked)
      if (f->aspect == aspects[a] && static_cast<Eigen::Index>(g.features.size()) < counts[a]) g.features.push_back(f->name);
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

std::vector<std::string> lag_columns(const FeatureMatrix& m) {
  std::vector<std::string> out;
  for (const auto& c : m.columns())
    if (c.aspect == FeatureAspect::HistoricalLoad) out.push_back(c.name);
  if (out.empty()) throw ParameterError("no historical-load columns in the candidate matrix");
  return out;
}

// MAPE on the test part for each model, trained on the given columns.
std::vector<double> score_columns(const DatasetSplit& parts, const std::vector<std::string>& names,
                                  std::span<const ModelConfig> models, std::uint64_t seed) {
  const FeatureMatrix train = parts.train.select_columns(std::span<const std::string>(names));
  const FeatureMatrix test = parts.test.select_columns(std::span<const std::string>(names));
  std::vector<double> out;
  for (const auto& m : models) {
    ModelConfig cfg = m;
    set_seed(cfg, seed);
    const TrainedModel model = train_model(cfg, train);
    out.push_back(mape(test.target().values(), model.predict(test)));
  }
  return out;
}

// Candidate columns ordered as in the matrix.
std::vector<std::string> in_matrix_order(const FeatureMatrix& m, std::vector<std::string> names) {
  std::vector<std::pair<Eigen::Index, std::string>> keyed;
  for (auto& n : names) keyed.emplace_back(m.index_of(n), std::move(n));
  std::sort(keyed.begin(), keyed.end());
  keyed.erase(std::unique(keyed.begin(), keyed.end()), keyed.end());
  std::vector<std::string> out;
  for (auto& [k, n] : keyed) out.push_back(std::move(n));
  return out;
}

void write_model_header(std::ostream& out, const std::vector<ModelKind>& models) {
  for (ModelKind k : models) out << ',' << to_string(k) << "_mape";
  out << '\n';
}

}  // namespace

void RankTable::write_csv(std::ostream& out) const {
  out << "feature,aspect";
  write_model_header(out, models);
  for (const auto& r : rows) {
    out << (r.feature.empty() ? std::string("none") : r.feature) << ',' << to_string(r.aspect);
    for (double v : r.mape) out << ',' << format_double(v);
    out << '\n';
  }
}

RankTable rank_single_features(const FeatureMatrix& candidates, std::span<const std::string> features,
                               std::span<const ModelConfig> models, const SplitRule& split, std::uint64_t seed,
                               int jobs) {
  if (models.empty()) throw ParameterError("ranking needs at least one model");
  const auto lags = lag_columns(candidates);
  const DatasetSplit parts = apply_split(candidates, split);
  RankTable table;
  for (const auto& m : models) table.models.push_back(kind_of(m));

  std::vector<FeatureRankRow> rows(features.size() + 1);
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    std::vector<std::string> cols = lags;
    FeatureRankRow& row = rows[i];
    if (i > 0) {
      const std::string& f = features[i - 1];
      const Eigen::Index j = candidates.index_of(f);
      row.feature = f;
      row.aspect = candidates.columns()[static_cast<std::size_t>(j)].aspect;
      cols.push_back(f);
      cols = in_matrix_order(candidates, std::move(cols));
    }
    row.mape = score_columns(parts, cols, models, seed);
  });

  auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); };
  std::stable_sort(rows.begin() + 1, rows.end(),
                   [&](const FeatureRankRow& a, const FeatureRankRow& b) { return mean(a.mape) < mean(b.mape); });
  table.rows = std::move(rows);
  return table;
}

void GroupTable::write_csv(std::ostream& out) const {
  out << "combo";
  write_model_header(out, models);
  for (const auto& r : rows) {
    out << r.combo;
    for (double v : r.mape) out << ',' << format_double(v);
    out << '\n';
  }
}

GroupTable group_experiment(const FeatureMatrix& candidates, std::span<const AspectGroup> groups,
                            std::span<const ModelConfig> models, const SplitRule& split, std::uint64_t seed, int jobs) {
  if (models.empty()) throw ParameterError("group experiment needs at least one model");
  const AspectGroup* by_aspect[3] = {nullptr, nullptr, nullptr};
  for (const auto& g : groups) {
    if (g.aspect == FeatureAspect::HistoricalLoad)
      throw ParameterError("group experiment: historical load is added to every combination, not a group");
    auto& slot = by_aspect[static_cast<int>(g.aspect)];
    if (slot) throw ParameterError("group experiment: aspect " + std::string(to_string(g.aspect)) + " given twice");
    if (g.features.empty())
      throw ParameterError("group experiment: aspect " + std::string(to_string(g.aspect)) + " has no features");
    for (const auto& f : g.features) {
      const Eigen::Index j = candidates.index_of(f);
      if (candidates.columns()[static_cast<std::size_t>(j)].aspect != g.aspect)
        throw ParameterError("group experiment: '" + f + "' is not a " + std::string(to_string(g.aspect)) + " feature");
    }
    slot = &g;
  }
  for (int a = 0; a < 3; ++a)
    if (!by_aspect[a])
      throw ParameterError("group experiment: missing aspect " + std::string(to_string(static_cast<FeatureAspect>(a))));

  const auto lags = lag_columns(candidates);
  const DatasetSplit parts = apply_split(candidates, split);
  GroupTable table;
  for (const auto& m : models) table.models.push_back(kind_of(m));
  const std::vector<std::vector<int>> combos{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
  table.rows.resize(combos.size());
  parallel_for(combos.size(), jobs, [&](std::size_t c) {
    std::vector<std::string> cols = lags;
    for (int a : combos[c]) cols.insert(cols.end(), by_aspect[a]->features.begin(), by_aspect[a]->features.end());
    cols = in_matrix_order(candidates, std::move(cols));
    GroupExperimentRow& row = table.rows[c];
    row.combo = kGroupCombos[c];
    row.mape = score_columns(parts, cols, models, seed);
    row.features = std::move(cols);
  });
  return table;
}

// ---- lag correlation ----

void LagScan::write_csv(std::ostream& out) const {
  out << "lag,r\n";
  for (std::size_t d = 0; d < r.size(); ++d) out << d << ',' << format_double(r[d]) << '\n';
}

LagScan lag_correlation_scan(const Eigen::VectorXd& feature, const Eigen::VectorXd& load, Eigen::Index max_lag) {
  if (feature.size() != load.size()) throw ParameterError("lag scan: feature and load differ in length");
  const Eigen::Index n = load.size();
  if (max_lag < 0 || max_lag >= n || n - max_lag < 3)
    throw ParameterError("lag scan: max_lag must be in [0, n - 3], got " + std::to_string(max_lag) + " for n = " +
                         std::to_string(n));
  LagScan scan;
  scan.r.resize(static_cast<std::size_t>(max_lag + 1));
  for (Eigen::Index d = 0; d <= max_lag; ++d) {
    const double r = pearson_r(load.tail(n - d), feature.head(n - d));
    scan.r[static_cast<std::size_t>(d)] = r;
    if (d == 0 || std::abs(r) > std::abs(scan.best_r)) {
      scan.best_r = r;
      scan.best_lag = d;
    }
  }
  return scan;
}

}  // namespace stlf
