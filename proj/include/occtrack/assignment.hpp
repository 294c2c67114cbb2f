#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "occtrack/geometry.hpp"

namespace occtrack {

/// Sentinel written into cost cells that must never produce a kept match.
/// Strictly greater than any gate used by the tracker.
inline constexpr double kGatedCost = 1e6;

/// Rectangular track x detection cost matrix, row-major, entries >= 0.
struct CostMatrix {
  int rows{0};
  int cols{0};
  std::vector<double> values;

  CostMatrix() = default;
  CostMatrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, fill) {}

  double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const {
    return values[static_cast<std::size_t>(r) * cols + c];
  }
  bool empty() const { return rows == 0 || cols == 0; }
};

/// Minimum-cost matching plus the leftovers on both sides. Every row and
/// column lands in exactly one of the three lists.
struct AssignmentResult {
  std::vector<std::pair<int, int>> matches;
  std::vector<int> unmatched_rows;
  std::vector<int> unmatched_cols;
};

/// 1 - cos(u, v), in [0, 2]. Throws ZeroVector on zero-norm input.
double cosine_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Minimum-total-cost assignment over a rectangular matrix (shortest
/// augmenting path solver). Entries above the gate are lifted to the
/// sentinel before solving so they cannot distort the optimum, and any
/// surviving match with cost > gate is demoted to unmatched afterwards.
AssignmentResult hungarian(const CostMatrix& costs, double gate);

/// Pairwise cosine distances between two embedding lists.
CostMatrix embedding_cost_matrix(const std::vector<Eigen::VectorXd>& track_embeddings,
                                 const std::vector<Eigen::VectorXd>& det_embeddings);

/// Pairwise IoU distances between two box lists.
CostMatrix iou_cost_matrix(const std::vector<BBox>& track_boxes,
                           const std::vector<BBox>& det_boxes);

}  // namespace occtrack
