#include "occtrack/transport.hpp"

#include <cmath>

#include "occtrack/errors.hpp"

namespace occtrack {

namespace {

// Row-wise log-sum-exp of an m x n array, max-shifted.
Eigen::ArrayXd lse_rows(const Eigen::ArrayXXd& x) {
  const Eigen::ArrayXd m = x.rowwise().maxCoeff();
  return m + (x.colwise() - m).exp().rowwise().sum().log();
}

}  // namespace

Eigen::MatrixXd affinity(const EmbeddingSet& source, const EmbeddingSet& target) {
  if (source.cols() != target.cols()) {
    throw DimensionMismatch("affinity: embedding dims differ");
  }
  const Eigen::VectorXd sn = source.rowwise().norm();
  const Eigen::VectorXd tn = target.rowwise().norm();
  if ((sn.array() <= 0.0).any() || (tn.array() <= 0.0).any()) {
    throw ZeroVector("affinity: zero-norm embedding row");
  }
  Eigen::MatrixXd a = source * target.transpose();
  a.array().colwise() /= sn.array();
  a.array().rowwise() /= tn.transpose().array();
  return (1.0 - a.array()).cwiseMax(0.0).cwiseMin(2.0).matrix();
}

TransportPlan sinkhorn(const Eigen::MatrixXd& affinity_matrix,
                       const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                       double epsilon, int max_iters, double tol) {
  const auto m = affinity_matrix.rows();
  const auto n = affinity_matrix.cols();
  if (mu.size() != n || nu.size() != m) {
    throw DimensionMismatch("sinkhorn: marginal lengths do not match matrix");
  }
  if ((mu.array() <= 0.0).any() || (nu.array() <= 0.0).any()) {
    throw InvalidMarginals("sinkhorn: marginals must be strictly positive");
  }
  if (std::abs(mu.sum() - nu.sum()) > 1e-9) {
    throw InvalidMarginals("sinkhorn: total masses differ");
  }
  if (epsilon <= 0.0) {
    throw InvalidMarginals("sinkhorn: epsilon must be positive");
  }

  const Eigen::ArrayXXd a = affinity_matrix.array();
  const Eigen::ArrayXd log_mu = mu.array().log();
  const Eigen::ArrayXd log_nu = nu.array().log();

  // Potentials in cost units; F = exp((phi + psi^T - A) / eps).
  Eigen::ArrayXd phi = Eigen::ArrayXd::Zero(m);
  Eigen::ArrayXd psi = Eigen::ArrayXd::Zero(n);

  TransportPlan plan;
  plan.row_marginal = nu;
  plan.col_marginal = mu;

  // Anneal epsilon downwards, one scaling pass per level, to warm-start the
  // potentials; cold starts at small epsilon converge impractically slowly.
  double level = std::max(epsilon, 1.0);
  int it = 0;
  while (it < max_iters) {
    ++it;
    const Eigen::ArrayXXd scaled = (-a) / level;
    phi = level * (log_nu - lse_rows((scaled.rowwise() + psi.transpose() / level)));
    psi = level *
          (log_mu - lse_rows((scaled.transpose().rowwise() + phi.transpose() / level)));

    plan.flow = (((scaled.colwise() + phi / level).rowwise() +
                  psi.transpose() / level))
                    .exp()
                    .matrix();
    const double row_violation =
        (plan.flow.rowwise().sum() - nu).cwiseAbs().maxCoeff();
    const double col_violation =
        (plan.flow.colwise().sum().transpose() - mu).cwiseAbs().maxCoeff();
    plan.marginal_violation = std::max(row_violation, col_violation);
    plan.iterations = it;

    if (level > epsilon) {
      level = std::max(epsilon, 0.5 * level);
    } else if (plan.marginal_violation < tol) {
      plan.converged = true;
      break;
    }
  }
  return plan;
}

std::pair<EmbeddingSet, EmbeddingSet> calibrate_embeddings(
    const EmbeddingSet& source, const EmbeddingSet& target, double epsilon,
    double alpha) {
  if (source.rows() == 0 || target.rows() == 0) {
    throw DimensionMismatch("calibrate_embeddings: empty set");
  }
  const auto m = source.rows();
  const auto n = target.rows();

  const Eigen::MatrixXd a = affinity(source, target);
  const Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, 1.0 / double(n));
  const Eigen::VectorXd nu = Eigen::VectorXd::Constant(m, 1.0 / double(m));
  const TransportPlan plan = sinkhorn(a, mu, nu, epsilon);

  // Barycentric cross-aggregation through the flow, one normalization per side.
  const Eigen::VectorXd row_sums = plan.flow.rowwise().sum();
  const Eigen::VectorXd col_sums = plan.flow.colwise().sum();
  const Eigen::MatrixXd source_agg =
      row_sums.cwiseInverse().asDiagonal() * plan.flow * target;
  const Eigen::MatrixXd target_agg =
      col_sums.cwiseInverse().asDiagonal() * plan.flow.transpose() * source;

  auto blend_normalize = [alpha](const EmbeddingSet& base,
                                 const Eigen::MatrixXd& agg) {
    EmbeddingSet out = (1.0 - alpha) * base + alpha * agg;
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      const double norm = out.row(r).norm();
      if (norm <= 0.0) {
        throw ZeroVector("calibrate_embeddings: blended row has zero norm");
      }
      out.row(r) /= norm;
    }
    return out;
  };

  return {blend_normalize(source, source_agg),
          blend_normalize(target, target_agg)};
}

}  // namespace occtrack
