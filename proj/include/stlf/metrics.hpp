#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "stlf/error.hpp"

namespace stlf {

namespace detail {
template <typename DerivedA, typename DerivedB>
void check_same_length(const Eigen::MatrixBase<DerivedA>& y, const Eigen::MatrixBase<DerivedB>& yhat,
                       const char* what) {
  if (y.size() != yhat.size())
    throw ParameterError(std::string(what) + ": length mismatch (" + std::to_string(y.size()) +
                         " actual vs " + std::to_string(yhat.size()) + " predicted)");
  if (y.size() == 0) throw ParameterError(std::string(what) + ": empty input");
}
}  // namespace detail

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar mae(const Eigen::MatrixBase<DerivedA>& y,
                              const Eigen::MatrixBase<DerivedB>& yhat) {
  detail::check_same_length(y, yhat, "mae");
  return (yhat - y).cwiseAbs().mean();
}

/// Mean absolute percentage error, in percent. Any zero actual is an error.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar mape(const Eigen::MatrixBase<DerivedA>& y,
                               const Eigen::MatrixBase<DerivedB>& yhat) {
  using Scalar = typename DerivedA::Scalar;
  detail::check_same_length(y, yhat, "mape");
  if ((y.array() == Scalar(0)).any()) throw UndefinedError("mape: undefined for a zero actual value");
  return ((yhat - y).array() / y.array()).abs().mean() * Scalar(100);
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar rmse(const Eigen::MatrixBase<DerivedA>& y,
                               const Eigen::MatrixBase<DerivedB>& yhat) {
  detail::check_same_length(y, yhat, "rmse");
  return std::sqrt((yhat - y).squaredNorm() / static_cast<typename DerivedA::Scalar>(y.size()));
}

struct MetricReport {
  double mae = 0.0;
  double mape = 0.0;  // percent
  double rmse = 0.0;
  Eigen::Index n = 0;
};

template <typename DerivedA, typename DerivedB>
MetricReport evaluate_forecast(const Eigen::MatrixBase<DerivedA>& y,
                               const Eigen::MatrixBase<DerivedB>& yhat) {
  return {mae(y, yhat), mape(y, yhat), rmse(y, yhat), y.size()};
}

}  // namespace stlf
