#include "stlf/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stlf/error.hpp"
#include "stlf/format.hpp"

namespace stlf {

std::string_view to_string(Scaling s) noexcept { return s == Scaling::Raw ? "raw" : "minmax"; }

Scaling parse_scaling(std::string_view text) {
  if (text == "raw") return Scaling::Raw;
  if (text == "minmax") return Scaling::MinMax;
  throw ParameterError("unknown scaling '" + std::string(text) + "' (expected raw or minmax)");
}

void SelectionConfig::validate() const {
  if (!(variance_threshold >= 0.0) || !std::isfinite(variance_threshold))
    throw ParameterError("variance threshold must be a finite non-negative number");
  if (k < 1) throw ParameterError("k must be at least 1");
}

std::vector<std::string> SelectionReport::kept_names() const {
  std::vector<const FeatureScore*> kept;
  for (const auto& f : features)
    if (f.kept) kept.push_back(&f);
  std::sort(kept.begin(), kept.end(), [](const FeatureScore* a, const FeatureScore* b) { return a->rank < b->rank; });
  std::vector<std::string> out;
  for (const auto* f : kept) out.push_back(f->name);
  return out;
}

void SelectionReport::write_csv(std::ostream& out) const {
  out << "name,aspect,variance,r,f,rank,kept\n";
  for (const auto& f : features) {
    out << f.name << ',' << to_string(f.aspect) << ',' << format_double(f.variance) << ',' << format_double(f.r)
        << ',' << format_double(f.f) << ',' << f.rank << ',' << (f.kept ? 1 : 0) << '\n';
  }
}

GateResult variance_gate(const Eigen::MatrixXd& x, double threshold, Scaling scaling) {
  if (x.rows() < 2) throw ParameterError("variance gate needs at least two samples");
  GateResult res;
  res.variances.resize(x.cols());
  const double cut = threshold - kVarianceGateSlack * std::max(1.0, threshold);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double v = scaling == Scaling::MinMax ? population_variance(minmax_scale(x.col(j)))
                                                : population_variance(x.col(j));
    res.variances(j) = v;
    (v < cut ? res.dropped : res.survivors).push_back(j);
  }
  return res;
}

double f_score(double r, Eigen::Index n) {
  if (n <= 2) throw ParameterError("f_score needs n > 2, got " + std::to_string(n));
  const double r2 = r * r;
  if (r2 >= 1.0) return std::numeric_limits<double>::infinity();
  return r2 / (1.0 - r2) * static_cast<double>(n - 2);
}

namespace {

SelectionReport score_and_rank(const FeatureMatrix& matrix, const SelectionConfig& config, Eigen::Index keep) {
  const Eigen::MatrixXd& x = matrix.values();
  const Eigen::VectorXd& y = matrix.target().values();
  const GateResult gate = variance_gate(x, config.variance_threshold, config.scaling);
  if (gate.survivors.empty()) throw ParameterError("no feature survives the variance gate");

  SelectionReport report;
  report.k_requested = config.k;
  report.survivors = static_cast<Eigen::Index>(gate.survivors.size());
  report.features.resize(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    auto& fs = report.features[static_cast<std::size_t>(j)];
    fs.name = matrix.columns()[static_cast<std::size_t>(j)].name;
    fs.aspect = matrix.columns()[static_cast<std::size_t>(j)].aspect;
    fs.variance = gate.variances(j);
    fs.stage_dropped = DropStage::VarianceGate;
  }
  for (Eigen::Index j : gate.survivors) {
    auto& fs = report.features[static_cast<std::size_t>(j)];
    // A survivor can still be constant on the raw scale only when the
    // threshold is zero; score it 0 rather than fail.
    try {
      fs.r = pearson_r(x.col(j), y);
    } catch (const UndefinedError&) {
      if (population_variance(y) == 0.0) throw;
      fs.r = 0.0;
    }
    fs.f = f_score(fs.r, x.rows());
    fs.stage_dropped = DropStage::TopK;
  }

  std::vector<Eigen::Index> order = gate.survivors;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return report.features[static_cast<std::size_t>(a)].f > report.features[static_cast<std::size_t>(b)].f;
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& fs = report.features[static_cast<std::size_t>(order[i])];
    fs.rank = static_cast<Eigen::Index>(i) + 1;
    if (fs.rank <= keep) {
      fs.kept = true;
      fs.stage_dropped = DropStage::None;
    }
  }
  report.k_exceeds_survivors = config.k > report.survivors;
  return report;
}

}  // namespace

SelectionReport score_features(const FeatureMatrix& matrix, const SelectionConfig& config) {
  config.validate();
  return score_and_rank(matrix, config, std::numeric_limits<Eigen::Index>::max());
}

std::pair<FeatureMatrix, SelectionReport> select_top_k(const FeatureMatrix& matrix, const SelectionConfig& config) {
  config.validate();
  SelectionReport report = score_and_rank(matrix, config, config.k);
  std::vector<Eigen::Index> kept;
  for (std::size_t j = 0; j < report.features.size(); ++j)
    if (report.features[j].kept) kept.push_back(static_cast<Eigen::Index>(j));
  return {matrix.select_columns(kept), std::move(report)};
}

}  // namespace stlf
