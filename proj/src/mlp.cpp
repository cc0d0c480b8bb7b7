#include "stlf/models/mlp.hpp"

#include <cmath>

#include "stlf/models/lbfgs.hpp"
#include "stlf/random.hpp"

namespace stlf {

void MlpConfig::validate() const {
  if (hidden_sizes != std::vector<int>{5, 2}) throw ParameterError("mlp: hidden layers must be [5, 2]");
  if (max_iters < 0) throw ParameterError("mlp: max_iters must be non-negative");
  if (!(tolerance > 0.0)) throw ParameterError("mlp: tolerance must be positive");
  if (!(l2_weight >= 0.0) || !std::isfinite(l2_weight)) throw ParameterError("mlp: l2_weight must be non-negative");
}

Eigen::Index mlp_parameter_count(const std::vector<int>& sizes) {
  Eigen::Index total = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) total += static_cast<Eigen::Index>(sizes[l + 1]) * (sizes[l] + 1);
  return total;
}

Eigen::VectorXd mlp_initial_parameters(const std::vector<int>& sizes, std::uint64_t seed) {
  Eigen::VectorXd params(mlp_parameter_count(sizes));
  Rng rng(seed);
  Eigen::Index k = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const double bound = std::sqrt(6.0 / static_cast<double>(sizes[l] + sizes[l + 1]));
    const Eigen::Index count = static_cast<Eigen::Index>(sizes[l + 1]) * (sizes[l] + 1);
    for (Eigen::Index i = 0; i < count; ++i) params(k++) = rng.uniform(-bound, bound);
  }
  return params;
}

Perceptron fit_perceptron(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const MlpConfig& config,
                          TrainingInfo* info) {
  config.validate();
  if (x.rows() != y.size()) throw ParameterError("mlp: X and y have different row counts");
  if (x.rows() < 2) throw TrainingError("mlp: need at least two rows");
  if (!x.allFinite() || !y.allFinite()) throw TrainingError("mlp: non-finite training data");

  Perceptron m;
  m.layer_sizes.push_back(static_cast<int>(x.cols()));
  m.layer_sizes.insert(m.layer_sizes.end(), config.hidden_sizes.begin(), config.hidden_sizes.end());
  m.layer_sizes.push_back(1);
  m.x_scaler = StandardScaler::fit(x);
  m.y_mean = y.mean();
  const double ysd = std::sqrt((y.array() - m.y_mean).square().mean());
  m.y_scale = ysd > 0.0 ? ysd : 1.0;

  const Eigen::MatrixXd z = m.x_scaler.transform(x);
  const Eigen::VectorXd t = (y.array() - m.y_mean) / m.y_scale;
  auto objective = [&](const Eigen::VectorXd& w, Eigen::VectorXd& g) {
    return mlp_loss_and_gradient<double>(m.layer_sizes, w, z, t, config.l2_weight, &g);
  };

  const Eigen::VectorXd init = mlp_initial_parameters(m.layer_sizes, config.seed);
  TrainingInfo local;
  local.initial_loss = mlp_loss_and_gradient<double>(m.layer_sizes, init, z, t, config.l2_weight, nullptr);

  LbfgsOptions<double> opt;
  opt.max_iterations = config.max_iters;
  opt.gradient_tolerance = config.tolerance;
  auto res = lbfgs_minimize<double>(objective, init, opt);
  m.params = std::move(res.x);
  local.final_loss = res.f;
  local.iterations = res.iterations;
  switch (res.status) {
    case LbfgsStatus::Converged:
      local.converged = true;
      break;
    case LbfgsStatus::MaxIterations:
      local.message = "mlp: iteration budget reached";
      break;
    case LbfgsStatus::LineSearchFailed:
      local.warning = true;
      local.message = "mlp: line search failed; returning the last accepted iterate";
      break;
    case LbfgsStatus::NonFinite:
      throw TrainingError("mlp: loss is not finite at the initial weights");
  }
  if (info) *info = std::move(local);
  return m;
}

}  // namespace stlf
