#include <doctest.h>

#include <cmath>

#include "occtrack/geometry.hpp"
#include "occtrack/rng.hpp"

using namespace occtrack;

namespace {

BBox random_box(Rng& rng) {
  return BBox{rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0),
              rng.uniform(0.5, 40.0), rng.uniform(0.5, 40.0)};
}

}  // namespace

TEST_CASE("iou on identical, disjoint and partially overlapping boxes") {
  const BBox unit2{0, 0, 2, 2};
  CHECK(iou(unit2, unit2) == doctest::Approx(1.0));
  CHECK(iou(BBox{0, 0, 1, 1}, BBox{5, 5, 1, 1}) == 0.0);
  // inter = 1x2 = 2, union = 4 + 4 - 2 = 6
  CHECK(iou(unit2, BBox{1, 0, 2, 2}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("edge-touching boxes have zero intersection") {
  CHECK(iou(BBox{0, 0, 2, 2}, BBox{2, 0, 2, 2}) == 0.0);
  CHECK(iou(BBox{0, 0, 2, 2}, BBox{0, 2, 2, 2}) == 0.0);
}

TEST_CASE("iou_distance complements iou") {
  const BBox a{0, 0, 2, 2};
  CHECK(iou_distance(a, a) == doctest::Approx(0.0));
  CHECK(iou_distance(a, BBox{10, 10, 1, 1}) == doctest::Approx(1.0));
  CHECK(iou_distance(a, BBox{1, 0, 2, 2}) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("iou symmetry, range and identity across random boxes") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const BBox a = random_box(rng), b = random_box(rng);
    const double ab = iou(a, b);
    CHECK(ab == iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(iou(a, a) == doctest::Approx(1.0));
  }
}

TEST_CASE("ciou_loss vanishes on identical boxes") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const BBox a = random_box(rng);
    CHECK(ciou_loss(a, a) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("ciou_loss on concentric same-aspect boxes reduces to 1 - IoU") {
  // IoU = 0.25, centers coincide, aspect equal -> v = 0.
  CHECK(ciou_loss(BBox{-0.5, -0.5, 1, 1}, BBox{-1, -1, 2, 2}) ==
        doctest::Approx(0.75));
}

TEST_CASE("ciou_loss on disjoint same-shape boxes is 1 + rho^2/c^2") {
  const BBox a{0, 0, 2, 2};
  const BBox b{10, 0, 2, 2};
  // centers (1,1) and (11,1); enclosing rect 12 x 2.
  const double rho_sq = 100.0;
  const double c_sq = 144.0 + 4.0;
  CHECK(ciou_loss(a, b) == doctest::Approx(1.0 + rho_sq / c_sq));
}

TEST_CASE("ciou_loss components stay in range and dominate 1 - iou - rho^2/c^2") {
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    const BBox p = random_box(rng), g = random_box(rng);
    const double loss = ciou_loss(p, g);

    const double dx = g.cx() - p.cx(), dy = g.cy() - p.cy();
    const double ex = std::max(p.right(), g.right()) - std::min(p.x, g.x);
    const double ey = std::max(p.bottom(), g.bottom()) - std::min(p.y, g.y);
    const double rho_term = (dx * dx + dy * dy) / (ex * ex + ey * ey);
    const double gap = std::atan(g.aspect()) - std::atan(p.aspect());
    const double v = 4.0 / (M_PI * M_PI) * gap * gap;

    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(loss >= 1.0 - iou(p, g) - rho_term - 1e-12);
  }
}

TEST_CASE("iou, v and rho are invariant under joint translation") {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    BBox a = random_box(rng), b = random_box(rng);
    const double shift_x = rng.uniform(-100.0, 100.0);
    const double shift_y = rng.uniform(-100.0, 100.0);
    BBox at = a, bt = b;
    at.x += shift_x;
    at.y += shift_y;
    bt.x += shift_x;
    bt.y += shift_y;
    CHECK(iou(a, b) == doctest::Approx(iou(at, bt)).epsilon(1e-12));
    CHECK(ciou_loss(a, b) == doctest::Approx(ciou_loss(at, bt)).epsilon(1e-9));
  }
}
