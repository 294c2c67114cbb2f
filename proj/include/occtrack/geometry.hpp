#pragma once

#include <cmath>

namespace occtrack {

/// Axis-aligned box in pixel units, stored as top-left corner plus size
/// (the MOT file convention). Valid boxes have w > 0, h > 0 and finite fields.
struct BBox {
  double x{0.0};  ///< left edge
  double y{0.0};  ///< top edge
  double w{0.0};
  double h{0.0};

  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }
  double aspect() const { return w / h; }

  bool valid() const {
    return w > 0.0 && h > 0.0 && std::isfinite(x) && std::isfinite(y) &&
           std::isfinite(w) && std::isfinite(h);
  }
};

/// Intersection over union, in [0, 1]. Edge-touching boxes count as 0.
double iou(const BBox& a, const BBox& b);

/// 1 - iou(a, b).
double iou_distance(const BBox& a, const BBox& b);

/// Complete-IoU regression loss between a predicted and a ground-truth box:
/// 1 - (IoU - rho^2/c^2 - v^2/(1 - IoU + v)) with rho the center distance,
/// c the diagonal of the smallest enclosing rectangle and v the squared
/// arctan aspect-ratio gap scaled by 4/pi^2. The v term is taken as 0 when
/// its denominator vanishes (identical aspect ratio at IoU = 1).
double ciou_loss(const BBox& pred, const BBox& gt);

}  // namespace occtrack
