#pragma once

// Fully connected tanh network with a linear output unit, trained full-batch
// with L-BFGS.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "stlf/error.hpp"
#include "stlf/models/scaler.hpp"
#include "stlf/models/training_info.hpp"

namespace stlf {

struct MlpConfig {
  std::vector<int> hidden_sizes{5, 2};
  int max_iters = 200;
  double tolerance = 1e-5;  // gradient infinity norm
  double l2_weight = 1e-4;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Perceptron {
  std::vector<int> layer_sizes;  // input, hidden..., 1
  StandardScaler x_scaler;
  double y_mean = 0.0;
  double y_scale = 1.0;
  Eigen::VectorXd params;  // per layer: W (out x in, column-major) then b
};

/// Number of parameters for the given layer sizes.
Eigen::Index mlp_parameter_count(const std::vector<int>& layer_sizes);

/// Seeded uniform init in ±sqrt(6/(fan_in + fan_out)) for weights and biases.
Eigen::VectorXd mlp_initial_parameters(const std::vector<int>& layer_sizes, std::uint64_t seed);

/// Network output for standardised inputs `z`.
template <typename Scalar, typename DerivedZ>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mlp_forward(const std::vector<int>& sizes,
                                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& params,
                                                     const Eigen::MatrixBase<DerivedZ>& z) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat a = z.template cast<Scalar>();
  Eigen::Index off = 0;
  const std::size_t layers = sizes.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const int in = sizes[l], out = sizes[l + 1];
    Eigen::Map<const Mat> w(params.data() + off, out, in);
    off += static_cast<Eigen::Index>(out) * in;
    Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> b(params.data() + off, out);
    off += out;
    Mat h = a * w.transpose();
    h.rowwise() += b.transpose();
    a = l + 1 < layers ? Mat(h.array().tanh().matrix()) : h;
  }
  return a.col(0);
}

/// Mean squared error on targets `t` plus l2·Σ‖W‖² (biases unpenalised).
/// Writes the gradient when `grad` is non-null.
template <typename Scalar, typename DerivedZ, typename DerivedT>
Scalar mlp_loss_and_gradient(const std::vector<int>& sizes, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& params,
                             const Eigen::MatrixBase<DerivedZ>& z, const Eigen::MatrixBase<DerivedT>& t,
                             Scalar l2_weight, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>* grad) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const std::size_t layers = sizes.size() - 1;
  const auto n = static_cast<Scalar>(z.rows());

  std::vector<Mat> acts;
  acts.reserve(layers + 1);
  acts.push_back(z.template cast<Scalar>());
  std::vector<Eigen::Index> offsets(layers);
  Eigen::Index off = 0;
  Scalar penalty(0);
  for (std::size_t l = 0; l < layers; ++l) {
    const int in = sizes[l], out = sizes[l + 1];
    offsets[l] = off;
    Eigen::Map<const Mat> w(params.data() + off, out, in);
    off += static_cast<Eigen::Index>(out) * in;
    Eigen::Map<const Vec> b(params.data() + off, out);
    off += out;
    penalty += w.squaredNorm();
    Mat h = acts.back() * w.transpose();
    h.rowwise() += b.transpose();
    acts.push_back(l + 1 < layers ? Mat(h.array().tanh().matrix()) : h);
  }
  const Vec resid = acts.back().col(0) - t.template cast<Scalar>();
  const Scalar loss = resid.squaredNorm() / n + l2_weight * penalty;
  if (!grad) return loss;

  grad->resize(params.size());
  Mat delta = (Scalar(2) / n) * resid;  // dL/dH for the output layer, n x 1
  for (std::size_t l = layers; l-- > 0;) {
    const int in = sizes[l], out = sizes[l + 1];
    Eigen::Map<const Mat> w(params.data() + offsets[l], out, in);
    Eigen::Map<Mat> gw(grad->data() + offsets[l], out, in);
    Eigen::Map<Vec> gb(grad->data() + offsets[l] + static_cast<Eigen::Index>(out) * in, out);
    gw = delta.transpose() * acts[l] + Scalar(2) * l2_weight * w;
    gb = delta.colwise().sum().transpose();
    if (l > 0) {
      Mat back = delta * w;
      delta = (back.array() * (Scalar(1) - acts[l].array().square())).matrix();
    }
  }
  return loss;
}

Perceptron fit_perceptron(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const MlpConfig& config,
                          TrainingInfo* info = nullptr);

template <typename Derived>
Eigen::VectorXd predict(const Perceptron& m, const Eigen::MatrixBase<Derived>& x) {
  const Eigen::MatrixXd z = m.x_scaler.transform(x);
  Eigen::VectorXd out(x.rows());
  // Row at a time so a prediction never depends on which other rows share the batch.
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    out(i) = m.y_mean + m.y_scale * mlp_forward<double>(m.layer_sizes, m.params, z.row(i))(0);
  return out;
}

}  // namespace stlf
