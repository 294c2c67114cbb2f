#include "occtrack/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace occtrack {

double iou(const BBox& a, const BBox& b) {
  const double ix = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  return inter / (a.area() + b.area() - inter);
}

double iou_distance(const BBox& a, const BBox& b) { return 1.0 - iou(a, b); }

double ciou_loss(const BBox& pred, const BBox& gt) {
  const double overlap = iou(pred, gt);

  const double dx = gt.cx() - pred.cx();
  const double dy = gt.cy() - pred.cy();
  const double rho_sq = dx * dx + dy * dy;

  const double ex = std::max(pred.right(), gt.right()) - std::min(pred.x, gt.x);
  const double ey =
      std::max(pred.bottom(), gt.bottom()) - std::min(pred.y, gt.y);
  const double c_sq = ex * ex + ey * ey;

  const double gap = std::atan(gt.aspect()) - std::atan(pred.aspect());
  const double v = (4.0 / (M_PI * M_PI)) * gap * gap;

  const double denom = 1.0 - overlap + v;
  const double v_term = denom > 0.0 ? v * v / denom : 0.0;

  return 1.0 - (overlap - rho_sq / c_sq - v_term);
}

}  // namespace occtrack
