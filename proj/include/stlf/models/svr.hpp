#pragma once

// Linear epsilon-insensitive support vector regression solved in the dual by
// cyclic coordinate descent.

#include <Eigen/Core>

#include "stlf/models/scaler.hpp"
#include "stlf/models/training_info.hpp"

namespace stlf {

struct SvrConfig {
  double c = 0.1;
  double epsilon = 0.1;  // in units of the target's standard deviation
  int max_iters = 1000;     // full sweeps over the training rows
  double tolerance = 1e-4;  // largest coordinate step of a sweep, relative to the first sweep's

  void validate() const;
};

/// Weights live in standardised space: z = (x - mean)/scale, t = (y - y_mean)/y_scale,
/// t_hat = w·z + b. The bias is regularised together with w.
struct LinearSvr {
  StandardScaler x_scaler;
  double y_mean = 0.0;
  double y_scale = 1.0;
  Eigen::VectorXd weights;
  double bias = 0.0;
};

/// (1/2)(‖w‖² + b²) + c·Σ max(0, |w·z_i + b − t_i| − epsilon) in standardised units.
template <typename DerivedZ, typename DerivedT>
double svr_primal_objective(const Eigen::VectorXd& w, double b, const Eigen::MatrixBase<DerivedZ>& z,
                            const Eigen::MatrixBase<DerivedT>& t, double c, double epsilon) {
  const Eigen::ArrayXd resid = ((z * w).array() + b) - t.array();
  return 0.5 * (w.squaredNorm() + b * b) + c * (resid.abs() - epsilon).max(0.0).sum();
}

LinearSvr fit_linear_svr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrConfig& config,
                         TrainingInfo* info = nullptr);

template <typename Derived>
Eigen::VectorXd predict(const LinearSvr& m, const Eigen::MatrixBase<Derived>& x) {
  const Eigen::MatrixXd z = m.x_scaler.transform(x);
  return ((z * m.weights).array() + m.bias).matrix() * m.y_scale + Eigen::VectorXd::Constant(x.rows(), m.y_mean);
}

}  // namespace stlf
