#pragma once

// Independent reference implementations used to check the library. They share
// no code with src/ beyond plain Eigen types.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Core>

namespace stlf::test {

// ---- LV-KB ----

struct OracleRanking {
  std::vector<long double> variance;
  std::vector<bool> survives;
  std::vector<long double> r;
  std::vector<long double> f;
  std::vector<long> rank;  // 1-based among survivors, 0 when gated out
  std::vector<bool> kept;
};

/// Column-by-column evaluation of the gate and the F-score ranking in long
/// double, with a selection sort that takes the first column among equals.
inline OracleRanking oracle_lvkb(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double threshold, long k,
                                 bool minmax) {
  const long n = x.rows(), p = x.cols();
  OracleRanking o;
  o.variance.assign(p, 0), o.survives.assign(p, false), o.r.assign(p, 0), o.f.assign(p, 0);
  o.rank.assign(p, 0), o.kept.assign(p, false);
  long double ym = 0;
  for (long i = 0; i < n; ++i) ym += y(i);
  ym /= n;
  for (long j = 0; j < p; ++j) {
    std::vector<long double> c(n);
    for (long i = 0; i < n; ++i) c[i] = x(i, j);
    if (minmax) {
      const long double lo = *std::min_element(c.begin(), c.end()), hi = *std::max_element(c.begin(), c.end());
      for (auto& v : c) v = hi > lo ? (v - lo) / (hi - lo) : 0.0L;
    }
    long double m = 0;
    for (auto v : c) m += v;
    m /= n;
    long double var = 0;
    for (auto v : c) var += (v - m) * (v - m);
    var /= n;
    o.variance[j] = var;
    o.survives[j] = var >= static_cast<long double>(threshold) - 1e-12L * std::max(1.0L, (long double)threshold);
    if (!o.survives[j]) continue;
    long double xm = 0;
    for (long i = 0; i < n; ++i) xm += x(i, j);
    xm /= n;
    long double sxy = 0, sxx = 0, syy = 0;
    for (long i = 0; i < n; ++i) {
      const long double dx = x(i, j) - xm, dy = y(i) - ym;
      sxy += dx * dy, sxx += dx * dx, syy += dy * dy;
    }
    o.r[j] = sxx > 0 ? sxy / std::sqrt(sxx * syy) : 0.0L;
    const long double r2 = o.r[j] * o.r[j];
    o.f[j] = r2 >= 1 ? std::numeric_limits<long double>::infinity() : r2 / (1 - r2) * (n - 2);
  }
  std::vector<bool> done(p, false);
  long next = 1;
  for (;;) {
    long best = -1;
    for (long j = 0; j < p; ++j)
      if (o.survives[j] && !done[j] && (best < 0 || o.f[j] > o.f[best])) best = j;
    if (best < 0) break;
    done[best] = true;
    o.rank[best] = next;
    o.kept[best] = next <= k;
    ++next;
  }
  return o;
}

// ---- SVR ----

/// Subgradient descent on
///   (1/2)(|w|^2 + b^2) + c * sum max(0, |w.z_i + b - t_i| - eps)
/// with diminishing steps, returning the best objective seen.
inline long double oracle_svr_objective(const Eigen::MatrixXd& z, const Eigen::VectorXd& t, double c, double eps,
                                        long iterations = 400000) {
  const long n = z.rows(), p = z.cols();
  using V = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> zl = z.cast<long double>();
  const V tl = t.cast<long double>();
  V theta = V::Zero(p + 1);  // w then b
  auto objective = [&](const V& th) {
    const V r = (zl * th.head(p)).array() + th(p) - tl.array();
    long double s = 0;
    for (long i = 0; i < n; ++i) s += std::max(0.0L, std::abs(r(i)) - (long double)eps);
    return 0.5L * th.squaredNorm() + (long double)c * s;
  };
  long double best = objective(theta);
  // Step scale from the subgradient bound c * sum |z_i| + 1.
  long double lip = 1;
  for (long i = 0; i < n; ++i) lip += c * std::sqrt(zl.row(i).squaredNorm() + 1);
  for (long k = 1; k <= iterations; ++k) {
    const V r = (zl * theta.head(p)).array() + theta(p) - tl.array();
    V g = theta;
    for (long i = 0; i < n; ++i) {
      if (std::abs(r(i)) <= eps) continue;
      const long double s = r(i) > 0 ? c : -c;
      g.head(p) += s * zl.row(i).transpose();
      g(p) += s;
    }
    theta -= (1.0L / (lip * std::sqrt((long double)k))) * g * (long double)std::sqrt((long double)p + 1);
    best = std::min(best, objective(theta));
  }
  return best;
}

// ---- gradients ----

/// Largest relative difference between `analytic` and central differences of
/// `f` around `x` (step h); differences are scaled by max(|a|, |b|, floor).
template <typename F>
long double max_relative_gradient_error(F&& f, const Eigen::Matrix<long double, Eigen::Dynamic, 1>& x,
                                        const Eigen::Matrix<long double, Eigen::Dynamic, 1>& analytic,
                                        long double h = 1e-6L, long double floor = 1e-8L) {
  long double worst = 0;
  Eigen::Matrix<long double, Eigen::Dynamic, 1> xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    const long double fd = (f(xp) - f(xm)) / (2 * h);
    xp(i) = xm(i) = x(i);
    const long double scale = std::max({std::abs(fd), std::abs(analytic(i)), floor});
    worst = std::max(worst, std::abs(fd - analytic(i)) / scale);
  }
  return worst;
}

}  // namespace stlf::test
