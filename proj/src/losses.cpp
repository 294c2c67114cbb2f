#include "occtrack/losses.hpp"

#include <cmath>

#include "occtrack/errors.hpp"

namespace occtrack {

namespace {
constexpr double kProbFloor = 1e-12;

double safe_log(double p) { return std::log(std::max(p, kProbFloor)); }
}  // namespace

double bce_loss(const LogitBatch& batch) {
  if (batch.logits.size() != batch.labels.size()) {
    throw DimensionMismatch("bce_loss: logits/labels length mismatch");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.logits.size(); ++i) {
    const double sigma = 1.0 / (1.0 + std::exp(-batch.logits[i]));
    const int y = batch.labels[i];
    loss -= y * safe_log(sigma) + (1 - y) * safe_log(1.0 - sigma);
  }
  return loss;
}

double reid_ce_loss(const IdentityDistribution& d) {
  if (static_cast<Eigen::Index>(d.labels.size()) != d.probs.rows()) {
    throw DimensionMismatch("reid_ce_loss: labels/probs length mismatch");
  }
  double loss = 0.0;
  for (Eigen::Index i = 0; i < d.probs.rows(); ++i) {
    const int k = d.labels[i];
    if (k < 0 || k >= d.probs.cols()) {
      throw DimensionMismatch("reid_ce_loss: label index out of range");
    }
    loss -= safe_log(d.probs(i, k));
  }
  return loss;
}

double total_loss(double l_cls, double l_reg, double l_reid) {
  return l_cls + l_reg + l_reid;
}

}  // namespace occtrack
