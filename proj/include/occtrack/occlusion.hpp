#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "occtrack/geometry.hpp"
#include "occtrack/rng.hpp"

namespace occtrack {

/// 8-bit RGB image, row-major (y, x, channel).
struct Image {
  int width{0};
  int height{0};
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {}

  std::uint8_t& at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
};

/// Binary visibility mask: 1 = untouched, 0 = erased.
struct OcclusionMask {
  int width{0};
  int height{0};
  std::vector<std::uint8_t> data;

  OcclusionMask() = default;
  OcclusionMask(int w, int h, std::uint8_t fill = 1)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t& at(int x, int y) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }

  std::size_t zero_count() const {
    std::size_t n = 0;
    for (auto v : data) n += v == 0;
    return n;
  }
};

/// Dense real-valued feature tensor, row-major (y, x, channel).
struct FeatureMap {
  int width{0};
  int height{0};
  int channels{0};
  std::vector<double> data;

  FeatureMap() = default;
  FeatureMap(int w, int h, int c, double fill = 0.0)
      : width(w),
        height(h),
        channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {}

  double& at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  double at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

enum class EraseSide { Left, Right, Bottom, Top };

/// Integer pixel rectangle [x, x+w) x [y, y+h).
struct PixelRect {
  int x{0}, y{0}, w{0}, h{0};
};

/// Side strip of a box: the chosen edge's strip covering the full
/// perpendicular extent and the given fraction of the parallel one, rounded
/// to whole pixels. Exposed for testing the erase geometry directly.
PixelRect erase_region(const BBox& box, EraseSide side, double scope);

/// Occlusion augmentation: pastes background crops over side strips of a
/// randomly chosen subset of boxes. round(ratio * |boxes|) boxes are erased;
/// side and scope (1/3..1/6 of the box area) are drawn uniformly; the crop
/// source is rejection-sampled until its IoU with every input box is < tau.
/// Returns the augmented image and the visibility mask (0 where erased).
/// Throws NoValidCrop when 1000 samples cannot satisfy the IoU bound.
std::pair<Image, OcclusionMask> random_erase(const Image& img,
                                             const std::vector<BBox>& boxes,
                                             double tau, double ratio,
                                             Rng& rng);

/// Channel attention from second-order statistics: 1x1 channel reduction,
/// spatial covariance of the reduced features, a linear map of the
/// vectorized covariance to one logistic gate per input channel, and
/// channel-wise rescaling of the input.
///   w_reduce: c x c', w_linear: (c'*c') x c, b_linear: c.
/// Returns the gated feature map and the attention vector.
std::pair<FeatureMap, Eigen::VectorXd> oaa_forward(
    const FeatureMap& f, const Eigen::MatrixXd& w_reduce,
    const Eigen::MatrixXd& w_linear, const Eigen::VectorXd& b_linear);

/// L2 norm of the feature response inside mask-zero regions; the mask is
/// aligned to the feature's spatial size by nearest-neighbour scaling.
double mask_loss(const FeatureMap& f_oa, const OcclusionMask& m);

}  // namespace occtrack
