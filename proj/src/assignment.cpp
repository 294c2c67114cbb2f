#include "occtrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "occtrack/errors.hpp"

namespace occtrack {

double cosine_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) {
    throw DimensionMismatch("cosine_distance: vector sizes differ");
  }
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) {
    throw ZeroVector("cosine_distance: zero-norm vector");
  }
  const double c = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
  return 1.0 - c;
}

namespace {

// Shortest augmenting path assignment (Jonker-Volgenant style) for a
// rectangular matrix with rows <= cols. Returns col index per row.
// Rows and columns are scanned in ascending order, which keeps the result
// deterministic and prefers low indices among equal-cost alternatives.
std::vector<int> solve_lap(const CostMatrix& a) {
  const int n = a.rows;
  const int m = a.cols;
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> match_col(m + 1, 0);  // row matched to column j (1-based)
  std::vector<int> way(m + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match_col[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match_col[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a.at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_col[j0] != 0);
    do {
      const int j1 = way[j0];
      match_col[j0] = match_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (match_col[j] > 0) row_to_col[match_col[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

AssignmentResult hungarian(const CostMatrix& costs, double gate) {
  AssignmentResult result;
  if (costs.empty()) {
    for (int r = 0; r < costs.rows; ++r) result.unmatched_rows.push_back(r);
    for (int c = 0; c < costs.cols; ++c) result.unmatched_cols.push_back(c);
    return result;
  }

  // Pre-gate: lift over-gate entries to the sentinel so they never distort
  // the optimum for the remaining pairs.
  CostMatrix work = costs;
  for (double& x : work.values) {
    if (x > gate) x = kGatedCost;
  }

  const bool transposed = work.rows > work.cols;
  if (transposed) {
    CostMatrix t(work.cols, work.rows);
    for (int r = 0; r < work.rows; ++r)
      for (int c = 0; c < work.cols; ++c) t.at(c, r) = work.at(r, c);
    work = std::move(t);
  }

  const std::vector<int> row_to_col = solve_lap(work);

  std::vector<char> row_matched(costs.rows, 0), col_matched(costs.cols, 0);
  for (int r = 0; r < work.rows; ++r) {
    const int c = row_to_col[r];
    if (c < 0) continue;
    const int orig_r = transposed ? c : r;
    const int orig_c = transposed ? r : c;
    if (costs.at(orig_r, orig_c) > gate) continue;  // post-gate demotion
    result.matches.emplace_back(orig_r, orig_c);
    row_matched[orig_r] = 1;
    col_matched[orig_c] = 1;
  }
  std::sort(result.matches.begin(), result.matches.end());

  for (int r = 0; r < costs.rows; ++r)
    if (!row_matched[r]) result.unmatched_rows.push_back(r);
  for (int c = 0; c < costs.cols; ++c)
    if (!col_matched[c]) result.unmatched_cols.push_back(c);
  return result;
}

CostMatrix embedding_cost_matrix(const std::vector<Eigen::VectorXd>& track_embeddings,
                                 const std::vector<Eigen::VectorXd>& det_embeddings) {
  CostMatrix m(static_cast<int>(track_embeddings.size()),
               static_cast<int>(det_embeddings.size()));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c)
      m.at(r, c) = cosine_distance(track_embeddings[r], det_embeddings[c]);
  return m;
}

CostMatrix iou_cost_matrix(const std::vector<BBox>& track_boxes,
                           const std::vector<BBox>& det_boxes) {
  CostMatrix m(static_cast<int>(track_boxes.size()),
               static_cast<int>(det_boxes.size()));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c)
      m.at(r, c) = iou_distance(track_boxes[r], det_boxes[c]);
  return m;
}

}  // namespace occtrack
