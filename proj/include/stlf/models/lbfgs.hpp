#pragma once

// Limited-memory BFGS with a strong-Wolfe line search (bracketing phase plus
// zoom with safeguarded cubic interpolation).

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace stlf {

template <typename Scalar>
struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 200;
  Scalar gradient_tolerance = Scalar(1e-5);  // on the infinity norm
  Scalar c1 = Scalar(1e-4);                  // sufficient decrease
  Scalar c2 = Scalar(0.9);                   // curvature
  int max_linesearch = 40;
  Scalar max_step = Scalar(1e10);
};

enum class LbfgsStatus { Converged, MaxIterations, LineSearchFailed, NonFinite };

template <typename Scalar>
struct LbfgsResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar f = Scalar(0);
  int iterations = 0;
  int evaluations = 0;
  LbfgsStatus status = LbfgsStatus::MaxIterations;
};

namespace detail {

// Minimiser of the cubic through (a, fa, da) and (b, fb, db), or NaN.
template <typename Scalar>
Scalar cubic_minimizer(Scalar a, Scalar fa, Scalar da, Scalar b, Scalar fb, Scalar db) {
  const Scalar d1 = da + db - Scalar(3) * (fa - fb) / (a - b);
  const Scalar disc = d1 * d1 - da * db;
  if (!(disc >= Scalar(0))) return std::numeric_limits<Scalar>::quiet_NaN();
  const Scalar d2 = (b > a ? Scalar(1) : Scalar(-1)) * std::sqrt(disc);
  return b - (b - a) * (db + d2 - d1) / (db - da + Scalar(2) * d2);
}

}  // namespace detail

/// Minimises `objective`, which must have the signature
/// `Scalar(const Vector& x, Vector& gradient)`. On a line-search failure the
/// last accepted iterate is returned with status LineSearchFailed.
template <typename Scalar, typename Objective>
LbfgsResult<Scalar> lbfgs_minimize(Objective&& objective, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x,
                                   const LbfgsOptions<Scalar>& opt = {}) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  LbfgsResult<Scalar> res;
  Vector g(x.size());
  Scalar f = objective(x, g);
  res.evaluations = 1;
  if (!std::isfinite(f) || !g.allFinite()) {
    res.x = std::move(x);
    res.f = f;
    res.status = LbfgsStatus::NonFinite;
    return res;
  }

  std::deque<Vector> s_hist, y_hist;
  std::deque<Scalar> rho_hist;
  Vector d(x.size()), x_new(x.size()), g_new(x.size());

  auto finish = [&](LbfgsStatus status) {
    res.x = x;
    res.f = f;
    res.status = status;
    return res;
  };

  for (int iter = 0;; ++iter) {
    if (g.template lpNorm<Eigen::Infinity>() < opt.gradient_tolerance) return finish(LbfgsStatus::Converged);
    if (iter >= opt.max_iterations) return finish(LbfgsStatus::MaxIterations);

    // Two-loop recursion.
    d = -g;
    std::vector<Scalar> alpha(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(d);
      d -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) d *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const Scalar beta = rho_hist[i] * y_hist[i].dot(d);
      d += (alpha[i] - beta) * s_hist[i];
    }
    Scalar dphi0 = g.dot(d);
    if (!(dphi0 < Scalar(0))) {
      // Not a descent direction: restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g;
      dphi0 = -g.squaredNorm();
    }

    const Scalar phi0 = f;
    auto eval = [&](Scalar a, Scalar& phi, Scalar& dphi) {
      x_new = x + a * d;
      phi = objective(x_new, g_new);
      ++res.evaluations;
      dphi = g_new.dot(d);
      return std::isfinite(phi) && g_new.allFinite();
    };

    Scalar step = s_hist.empty() ? std::min(Scalar(1), Scalar(1) / d.norm()) : Scalar(1);
    Scalar a_lo = 0, f_lo = phi0, d_lo = dphi0;
    Scalar a_hi = 0, f_hi = 0, d_hi = 0;
    bool bracketed = false, accepted = false;
    Scalar a_prev = 0, f_prev = phi0, d_prev = dphi0;
    Scalar a_acc = 0, f_acc = phi0;
    Vector g_acc;

    int trials = 0;
    while (trials < opt.max_linesearch) {
      Scalar phi, dphi;
      ++trials;
      if (!eval(step, phi, dphi)) {
        step = (a_prev + step) / Scalar(2);
        continue;
      }
      if (phi > phi0 + opt.c1 * step * dphi0 || (trials > 1 && phi >= f_prev)) {
        a_lo = a_prev, f_lo = f_prev, d_lo = d_prev;
        a_hi = step, f_hi = phi, d_hi = dphi;
        bracketed = true;
        break;
      }
      if (std::abs(dphi) <= -opt.c2 * dphi0) {
        a_acc = step, f_acc = phi, g_acc = g_new, accepted = true;
        break;
      }
      if (dphi >= Scalar(0)) {
        a_lo = step, f_lo = phi, d_lo = dphi;
        a_hi = a_prev, f_hi = f_prev, d_hi = d_prev;
        a_acc = step, f_acc = phi, g_acc = g_new;
        bracketed = true;
        break;
      }
      a_acc = step, f_acc = phi, g_acc = g_new;
      a_prev = step, f_prev = phi, d_prev = dphi;
      step = std::min(step * Scalar(2), opt.max_step);
    }

    while (bracketed && !accepted && trials < opt.max_linesearch) {
      const Scalar width = std::abs(a_hi - a_lo);
      if (width <= std::numeric_limits<Scalar>::epsilon() * std::max(Scalar(1), std::abs(a_lo))) break;
      Scalar trial = detail::cubic_minimizer(a_lo, f_lo, d_lo, a_hi, f_hi, d_hi);
      const Scalar lo_edge = std::min(a_lo, a_hi) + Scalar(0.1) * width;
      const Scalar hi_edge = std::max(a_lo, a_hi) - Scalar(0.1) * width;
      if (!std::isfinite(trial) || trial < lo_edge || trial > hi_edge) trial = (a_lo + a_hi) / Scalar(2);
      Scalar phi, dphi;
      ++trials;
      if (!eval(trial, phi, dphi)) {
        a_hi = trial, f_hi = std::numeric_limits<Scalar>::max(), d_hi = 0;
        continue;
      }
      if (phi > phi0 + opt.c1 * trial * dphi0 || phi >= f_lo) {
        a_hi = trial, f_hi = phi, d_hi = dphi;
      } else {
        a_acc = trial, f_acc = phi, g_acc = g_new;
        if (std::abs(dphi) <= -opt.c2 * dphi0) {
          accepted = true;
          break;
        }
        if (dphi * (a_hi - a_lo) >= Scalar(0)) a_hi = a_lo, f_hi = f_lo, d_hi = d_lo;
        a_lo = trial, f_lo = phi, d_lo = dphi;
      }
    }

    if (!(a_acc > Scalar(0)) || !(f_acc < phi0)) return finish(LbfgsStatus::LineSearchFailed);

    Vector s = a_acc * d;
    Vector yv = g_acc - g;
    x += s;
    f = f_acc;
    g = g_acc;
    res.iterations = iter + 1;

    const Scalar sy = s.dot(yv);
    if (sy > std::numeric_limits<Scalar>::epsilon() * yv.squaredNorm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(Scalar(1) / sy);
      if (static_cast<int>(s_hist.size()) > opt.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    if (!accepted && !bracketed && trials >= opt.max_linesearch) {
      // Kept extending without satisfying curvature; the step was still a
      // decrease, so carry on from there.
      continue;
    }
  }
}

}  // namespace stlf
