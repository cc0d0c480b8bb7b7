#include "stlf/models/svr.hpp"

#include <algorithm>
#include <cmath>

#include "stlf/error.hpp"
#include "stlf/random.hpp"

namespace stlf {

namespace {
constexpr std::uint64_t kSweepOrderSeed = 0x5eed;
}  // namespace

void SvrConfig::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("svr: c must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ParameterError("svr: epsilon must be non-negative");
  if (max_iters < 0) throw ParameterError("svr: max_iters must be non-negative");
  if (!(tolerance > 0.0)) throw ParameterError("svr: tolerance must be positive");
}

LinearSvr fit_linear_svr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrConfig& config,
                         TrainingInfo* info) {
  config.validate();
  if (x.rows() != y.size()) throw ParameterError("svr: X and y have different row counts");
  if (x.rows() < 2) throw TrainingError("svr: need at least two rows");
  if (!x.allFinite() || !y.allFinite()) throw TrainingError("svr: non-finite training data");

  LinearSvr m;
  m.x_scaler = StandardScaler::fit(x);
  m.y_mean = y.mean();
  const double ysd = std::sqrt((y.array() - m.y_mean).square().mean());
  m.y_scale = ysd > 0.0 ? ysd : 1.0;

  const Eigen::Index n = x.rows(), p = x.cols();
  // Augment with a constant column so the bias is one more weight.
  Eigen::MatrixXd z(n, p + 1);
  z.leftCols(p) = m.x_scaler.transform(x);
  z.col(p).setOnes();
  const Eigen::VectorXd t = (y.array() - m.y_mean) / m.y_scale;
  const Eigen::MatrixXd zt = z.transpose();  // rows contiguous for the sweep
  const Eigen::VectorXd qdiag = z.rowwise().squaredNorm();

  // One fixed visiting order for every sweep; a permutation rather than time
  // order, because neighbouring rows are nearly collinear.
  const std::vector<Eigen::Index> order = seeded_permutation(n, kSweepOrderSeed);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(p + 1);
  const double c = config.c, eps = config.epsilon;

  TrainingInfo local;
  local.initial_loss = svr_primal_objective(w.head(p), w(p), z.leftCols(p), t, c, eps);
  int sweep = 0;
  double first_violation = 0.0;
  for (; sweep < config.max_iters; ++sweep) {
    double max_violation = 0.0;
    for (Eigen::Index i : order) {
      const double q = qdiag(i);
      if (q <= 0.0) continue;
      const double g = zt.col(i).dot(w) - t(i);
      // Exact minimiser of (q/2)(b - u)² + eps·|b| over [-c, c].
      const double u = beta(i) - g / q;
      double nb = std::copysign(std::max(0.0, std::abs(u) - eps / q), u);
      nb = std::clamp(nb, -c, c);
      const double delta = nb - beta(i);
      if (delta != 0.0) {
        w.noalias() += delta * zt.col(i);
        beta(i) = nb;
      }
      max_violation = std::max(max_violation, std::abs(delta) * q);
    }
    if (sweep == 0) first_violation = max_violation;
    if (max_violation <= config.tolerance * first_violation) {
      local.converged = true;
      ++sweep;
      break;
    }
  }
  m.weights = w.head(p);
  m.bias = w(p);
  local.iterations = sweep;
  local.final_loss = svr_primal_objective(m.weights, m.bias, z.leftCols(p), t, c, eps);
  if (!local.converged && config.max_iters > 0) {
    local.warning = true;
    local.message = "svr: sweep budget exhausted before convergence";
  }
  if (info) *info = std::move(local);
  return m;
}

}  // namespace stlf
