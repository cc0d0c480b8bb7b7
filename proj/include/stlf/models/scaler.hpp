#pragma once

#include <cmath>

#include <Eigen/Core>

#include "stlf/error.hpp"

namespace stlf {

/// Per-column standardisation learned on training data. Columns with zero
/// spread keep a unit scale, so they map to 0.
template <typename Scalar>
class StandardScalerT {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  StandardScalerT() = default;
  StandardScalerT(Vector mean, Vector scale) : mean_(std::move(mean)), scale_(std::move(scale)) {
    if (mean_.size() != scale_.size()) throw ParameterError("scaler: mean and scale differ in length");
  }

  template <typename Derived>
  static StandardScalerT fit(const Eigen::MatrixBase<Derived>& x) {
    if (x.rows() == 0) throw ParameterError("scaler: cannot fit on zero rows");
    Vector mean = x.colwise().mean().transpose();
    Vector scale(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const Scalar var = (x.col(j).array() - mean(j)).square().mean();
      const Scalar sd = std::sqrt(var);
      scale(j) = sd > Scalar(0) ? sd : Scalar(1);
    }
    return {std::move(mean), std::move(scale)};
  }

  template <typename Derived>
  Matrix transform(const Eigen::MatrixBase<Derived>& x) const {
    check(x.cols());
    return ((x.rowwise() - mean_.transpose()).array().rowwise() / scale_.transpose().array()).matrix();
  }

  template <typename Derived>
  Matrix inverse(const Eigen::MatrixBase<Derived>& z) const {
    check(z.cols());
    return ((z.array().rowwise() * scale_.transpose().array()).matrix().rowwise() + mean_.transpose());
  }

  const Vector& mean() const noexcept { return mean_; }
  const Vector& scale() const noexcept { return scale_; }
  Eigen::Index size() const noexcept { return mean_.size(); }

 private:
  void check(Eigen::Index cols) const {
    if (cols != mean_.size())
      throw SchemaError("scaler: expected " + std::to_string(mean_.size()) + " columns, got " + std::to_string(cols));
  }

  Vector mean_;
  Vector scale_;
};

using StandardScaler = StandardScalerT<double>;

}  // namespace stlf
