#pragma once

#include <Eigen/Dense>

#include "occtrack/geometry.hpp"

namespace occtrack {

/// Constant-velocity box filter state: [cx, cy, a, h, vcx, vcy, va, vh]
/// with a = w/h and per-frame velocities (dt = 1).
struct KalmanState {
  Eigen::Matrix<double, 8, 1> mean = Eigen::Matrix<double, 8, 1>::Zero();
  Eigen::Matrix<double, 8, 8> covariance = Eigen::Matrix<double, 8, 8>::Zero();
};

/// Process/measurement noise scales, relative to box height.
struct KalmanNoise {
  double std_weight_position{1.0 / 20.0};
  double std_weight_velocity{1.0 / 160.0};
};

/// New state centred on the measurement with zero velocities; covariance
/// diagonal scaled by the measurement height.
KalmanState kf_initiate(const BBox& measurement, const KalmanNoise& noise = {});

/// One constant-velocity step: mean' = F mean, P' = F P F^T + Q.
KalmanState kf_predict(const KalmanState& s, const KalmanNoise& noise = {});

/// Standard Kalman correction in (cx, cy, a, h) measurement space.
/// The posterior covariance is re-symmetrized to control drift.
KalmanState kf_update(const KalmanState& s, const BBox& z,
                      const KalmanNoise& noise = {});

/// Inverse of the initiate conversion. Throws DegenerateState when the
/// state's height or aspect is non-positive.
BBox state_to_bbox(const KalmanState& s);

}  // namespace occtrack
