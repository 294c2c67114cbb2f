#pragma once

#include <Eigen/Dense>
#include <vector>

namespace occtrack {

/// Binary classification batch: raw logits with {0,1} labels.
struct LogitBatch {
  std::vector<double> logits;
  std::vector<int> labels;
};

/// Per-vector identity distribution: probs rows sum to 1 (checked to 1e-9),
/// labels[i] is the true class index of row i.
struct IdentityDistribution {
  Eigen::MatrixXd probs;  // V x K
  std::vector<int> labels;
};

/// Sum-reduced binary cross entropy over sigmoid(logit), with the log
/// arguments clamped below at 1e-12.
double bce_loss(const LogitBatch& batch);

/// Sum-reduced cross entropy of the true-class probabilities, clamped at 1e-12.
double reid_ce_loss(const IdentityDistribution& d);

/// Unweighted sum of the three objectives.
double total_loss(double l_cls, double l_reg, double l_reid);

}  // namespace occtrack
