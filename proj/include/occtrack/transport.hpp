#pragma once

#include <Eigen/Dense>
#include <utility>

namespace occtrack {

/// Row-per-vector embedding set; every row must have positive norm.
using EmbeddingSet = Eigen::MatrixXd;

/// Entropic transport plan between a source set (rows, marginal nu) and a
/// target set (columns, marginal mu). `converged` is false when the solver
/// hit max_iters before the marginal violation dropped below tol.
struct TransportPlan {
  Eigen::MatrixXd flow;          // m x n, entries >= 0
  Eigen::VectorXd row_marginal;  // nu, length m
  Eigen::VectorXd col_marginal;  // mu, length n
  bool converged{false};
  double marginal_violation{0.0};
  int iterations{0};

  double cost(const Eigen::MatrixXd& affinity) const {
    return (affinity.array() * flow.array()).sum();
  }
};

/// Pairwise cosine-distance affinity A(m, n) = 1 - cos(source_m, target_n).
Eigen::MatrixXd affinity(const EmbeddingSet& source, const EmbeddingSet& target);

/// Entropy-regularized optimal transport solved by Sinkhorn scaling in the
/// log domain (stable at small epsilon). mu and nu must be strictly positive
/// with equal total mass (within 1e-9); otherwise InvalidMarginals.
TransportPlan sinkhorn(const Eigen::MatrixXd& affinity_matrix,
                       const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                       double epsilon = 0.1, int max_iters = 1000,
                       double tol = 1e-6);

/// Cross-frame embedding calibration: solves uniform-marginal transport over
/// the affinity between the two sets, aggregates each side through the
/// normalized flow, then blends with weight alpha and re-normalizes rows.
/// alpha = 0 returns the inputs row-normalized.
std::pair<EmbeddingSet, EmbeddingSet> calibrate_embeddings(
    const EmbeddingSet& source, const EmbeddingSet& target,
    double epsilon = 0.1, double alpha = 0.5);

}  // namespace occtrack
