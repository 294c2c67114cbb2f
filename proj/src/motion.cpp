#include "occtrack/motion.hpp"

#include <cmath>

#include "occtrack/errors.hpp"

namespace occtrack {

namespace {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat48 = Eigen::Matrix<double, 4, 8>;

Mat8 transition() {
  Mat8 f = Mat8::Identity();
  for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;  // dt = 1
  return f;
}

// Aspect ratio is dimensionless, so its noise floor is a small constant
// rather than a height-scaled one.
Vec4 position_std(double h, const KalmanNoise& n) {
  const double p = n.std_weight_position * h;
  return Vec4{p, p, 1e-2, p};
}

Vec4 velocity_std(double h, const KalmanNoise& n) {
  const double v = n.std_weight_velocity * h;
  return Vec4{v, v, 1e-5, v};
}

}  // namespace

KalmanState kf_initiate(const BBox& measurement, const KalmanNoise& noise) {
  KalmanState s;
  s.mean.head<4>() << measurement.cx(), measurement.cy(), measurement.aspect(),
      measurement.h;

  const Vec4 p = 2.0 * position_std(measurement.h, noise);
  const Vec4 v = 10.0 * velocity_std(measurement.h, noise);
  Vec8 std;
  std << p, v;
  s.covariance = std.cwiseProduct(std).asDiagonal();
  return s;
}

KalmanState kf_predict(const KalmanState& s, const KalmanNoise& noise) {
  const double h = s.mean(3);
  const Vec4 p = position_std(h, noise);
  const Vec4 v = velocity_std(h, noise);
  Vec8 std;
  std << p, v;
  const Mat8 q = std.cwiseProduct(std).asDiagonal();

  const Mat8 f = transition();
  KalmanState out;
  out.mean = f * s.mean;
  out.covariance = f * s.covariance * f.transpose() + q;
  return out;
}

KalmanState kf_update(const KalmanState& s, const BBox& z,
                      const KalmanNoise& noise) {
  const Mat48 h_mat = Mat48::Identity();

  const Vec4 r_std = position_std(s.mean(3), noise);
  const Mat4 r = r_std.cwiseProduct(r_std).asDiagonal();

  const Vec4 projected_mean = s.mean.head<4>();
  const Mat4 innovation_cov =
      s.covariance.topLeftCorner<4, 4>() + r;

  Vec4 measurement;
  measurement << z.cx(), z.cy(), z.aspect(), z.h;

  // Gain via Cholesky solve of S K^T = H P^T.
  const Eigen::LLT<Mat4> chol(innovation_cov);
  const Eigen::Matrix<double, 8, 4> gain =
      chol.solve(h_mat * s.covariance.transpose()).transpose();

  KalmanState out;
  out.mean = s.mean + gain * (measurement - projected_mean);
  out.covariance = s.covariance - gain * innovation_cov * gain.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  return out;
}

BBox state_to_bbox(const KalmanState& s) {
  const double a = s.mean(2);
  const double h = s.mean(3);
  if (h <= 0.0 || a <= 0.0) {
    throw DegenerateState("state_to_bbox: non-positive height or aspect");
  }
  const double w = a * h;
  return BBox{s.mean(0) - 0.5 * w, s.mean(1) - 0.5 * h, w, h};
}

}  // namespace occtrack
