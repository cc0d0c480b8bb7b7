#pragma once

// Column statistics over Eigen expressions. Everything here is templated on
// the expression type so that blocks, maps and temporaries can be passed
// without copies.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "stlf/error.hpp"

namespace stlf {

/// Population variance (divide by n).
template <typename Derived>
typename Derived::Scalar population_variance(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const auto n = x.size();
  if (n == 0) return Scalar(0);
  const Scalar mean = x.mean();
  return (x.array() - mean).square().sum() / static_cast<Scalar>(n);
}

/// Maps x onto [0, 1] by its own range. A constant column maps to zeros.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> minmax_scale(
    const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Scalar lo = x.minCoeff();
  const Scalar range = x.maxCoeff() - lo;
  if (!(range > Scalar(0))) return Vector::Zero(x.size());
  return ((x.array() - lo) / range).matrix();
}

/// Pearson correlation: centred cross-product over the product of centred norms.
/// Throws UndefinedError when either side has zero spread.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar pearson_r(const Eigen::MatrixBase<DerivedX>& x,
                                    const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  if (x.size() != y.size()) throw ParameterError("pearson_r: length mismatch");
  if (x.size() < 2) throw ParameterError("pearson_r: need at least two samples");
  const auto xc = (x.array() - x.mean()).eval();
  const auto yc = (y.array() - y.mean()).eval();
  const Scalar sxx = xc.square().sum();
  const Scalar syy = yc.square().sum();
  if (!(sxx > Scalar(0)) || !(syy > Scalar(0)))
    throw UndefinedError("pearson_r: correlation undefined for a constant series");
  const Scalar r = (xc * yc).sum() / std::sqrt(sxx * syy);
  return std::clamp(r, Scalar(-1), Scalar(1));
}

/// Percentile with linear interpolation between order statistics, p in [0, 100].
template <typename Derived>
typename Derived::Scalar percentile(const Eigen::MatrixBase<Derived>& x, double p) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) throw ParameterError("percentile: empty input");
  std::vector<Scalar> sorted(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) sorted[static_cast<std::size_t>(i)] = x(i);
  std::sort(sorted.begin(), sorted.end());
  const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const Scalar frac = static_cast<Scalar>(pos - static_cast<double>(lo));
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// Mean and population standard deviation of a sample, for run summaries.
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

inline MeanStd mean_std(const std::vector<double>& values) {
  if (values.empty()) return {};
  // Identical values give an exact zero rather than round-off from the mean.
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); }))
    return {values.front(), 0.0};
  const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
  return {v.mean(), std::sqrt(population_variance(v))};
}

}  // namespace stlf
