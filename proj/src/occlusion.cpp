#include "occtrack/occlusion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "occtrack/errors.hpp"

namespace occtrack {

namespace {

constexpr int kMaxCropAttempts = 1000;
constexpr std::array<double, 4> kScopes = {1.0 / 3, 1.0 / 4, 1.0 / 5, 1.0 / 6};

PixelRect clamp_to(const PixelRect& r, int width, int height) {
  PixelRect c;
  c.x = std::clamp(r.x, 0, width);
  c.y = std::clamp(r.y, 0, height);
  c.w = std::clamp(r.w, 0, width - c.x);
  c.h = std::clamp(r.h, 0, height - c.y);
  return c;
}

BBox to_bbox(const PixelRect& r) {
  return BBox{static_cast<double>(r.x), static_cast<double>(r.y),
              static_cast<double>(r.w), static_cast<double>(r.h)};
}

}  // namespace

PixelRect erase_region(const BBox& box, EraseSide side, double scope) {
  double x = box.x, y = box.y, w = box.w, h = box.h;
  switch (side) {
    case EraseSide::Left:
      w = scope * box.w;
      break;
    case EraseSide::Right:
      w = scope * box.w;
      x = box.right() - w;
      break;
    case EraseSide::Top:
      h = scope * box.h;
      break;
    case EraseSide::Bottom:
      h = scope * box.h;
      y = box.bottom() - h;
      break;
  }
  PixelRect r;
  r.x = static_cast<int>(std::lround(x));
  r.y = static_cast<int>(std::lround(y));
  r.w = std::max(1, static_cast<int>(std::lround(w)));
  r.h = std::max(1, static_cast<int>(std::lround(h)));
  return r;
}

std::pair<Image, OcclusionMask> random_erase(const Image& img,
                                             const std::vector<BBox>& boxes,
                                             double tau, double ratio,
                                             Rng& rng) {
  Image out = img;
  OcclusionMask mask(img.width, img.height, 1);

  const int n = static_cast<int>(std::lround(ratio * boxes.size()));
  if (n == 0) return {out, mask};

  // Partial Fisher-Yates draw of n box indices without replacement.
  std::vector<int> order(boxes.size());
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < n; ++i) {
    const int j = i + rng.uniform_int(static_cast<int>(order.size()) - i);
    std::swap(order[i], order[j]);
  }

  for (int k = 0; k < n; ++k) {
    const BBox& box = boxes[order[k]];
    const auto side = static_cast<EraseSide>(rng.uniform_int(4));
    const double scope = kScopes[rng.uniform_int(4)];

    const PixelRect region =
        clamp_to(erase_region(box, side, scope), img.width, img.height);
    if (region.w == 0 || region.h == 0) continue;

    // Background crop of identical size whose IoU with every box stays
    // below tau.
    PixelRect crop{0, 0, region.w, region.h};
    bool found = false;
    for (int attempt = 0; attempt < kMaxCropAttempts; ++attempt) {
      crop.x = rng.uniform_int(img.width - region.w + 1);
      crop.y = rng.uniform_int(img.height - region.h + 1);
      const BBox crop_box = to_bbox(crop);
      found = std::all_of(boxes.begin(), boxes.end(), [&](const BBox& b) {
        return iou(crop_box, b) < tau;
      });
      if (found) break;
    }
    if (!found) {
      throw NoValidCrop("random_erase: no background crop clears the IoU bound");
    }

    // Paste from the pristine input so earlier erasures never bleed in.
    for (int dy = 0; dy < region.h; ++dy) {
      for (int dx = 0; dx < region.w; ++dx) {
        for (int c = 0; c < 3; ++c) {
          out.at(region.x + dx, region.y + dy, c) =
              img.at(crop.x + dx, crop.y + dy, c);
        }
        mask.at(region.x + dx, region.y + dy) = 0;
      }
    }
  }
  return {out, mask};
}

std::pair<FeatureMap, Eigen::VectorXd> oaa_forward(
    const FeatureMap& f, const Eigen::MatrixXd& w_reduce,
    const Eigen::MatrixXd& w_linear, const Eigen::VectorXd& b_linear) {
  const int c = f.channels;
  const Eigen::Index c_red = w_reduce.cols();
  const Eigen::Index hw =
      static_cast<Eigen::Index>(f.width) * static_cast<Eigen::Index>(f.height);
  if (hw == 0 || c == 0) {
    throw DimensionMismatch("oaa_forward: empty feature map");
  }
  if (w_reduce.rows() != c || w_linear.rows() != c_red * c_red ||
      w_linear.cols() != c || b_linear.size() != c) {
    throw DimensionMismatch("oaa_forward: weight shapes inconsistent");
  }

  // (hw) x c view of the feature tensor; spatial order is irrelevant to the
  // channel statistics.
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>
      x(f.data.data(), hw, c);

  Eigen::MatrixXd reduced = x * w_reduce;  // 1x1 conv, c -> c'
  reduced.rowwise() -= reduced.colwise().mean();
  const Eigen::MatrixXd cov =
      reduced.transpose() * reduced / static_cast<double>(hw);

  const Eigen::Map<const Eigen::VectorXd> cov_vec(cov.data(), c_red * c_red);
  const Eigen::VectorXd pre = w_linear.transpose() * cov_vec + b_linear;
  const Eigen::VectorXd attention =
      (1.0 / (1.0 + (-pre.array()).exp())).matrix();

  FeatureMap out = f;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] *= attention(static_cast<Eigen::Index>(i % c));
  }
  return {std::move(out), attention};
}

double mask_loss(const FeatureMap& f_oa, const OcclusionMask& m) {
  if (f_oa.width == 0 || f_oa.height == 0 || m.width == 0 || m.height == 0) {
    throw DimensionMismatch("mask_loss: empty feature map or mask");
  }
  // Nearest-neighbour alignment of the mask onto the feature grid.
  double sum_sq = 0.0;
  for (int y = 0; y < f_oa.height; ++y) {
    const int my = std::min(
        m.height - 1, static_cast<int>((y + 0.5) * m.height / f_oa.height));
    for (int x = 0; x < f_oa.width; ++x) {
      const int mx = std::min(
          m.width - 1, static_cast<int>((x + 0.5) * m.width / f_oa.width));
      if (m.at(mx, my) != 0) continue;
      for (int c = 0; c < f_oa.channels; ++c) {
        const double v = f_oa.at(x, y, c);
        sum_sq += v * v;
      }
    }
  }
  return std::sqrt(sum_sq);
}

}  // namespace occtrack
