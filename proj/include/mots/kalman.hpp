#pragma once

#include <Eigen/Core>

#include "mots/geometry.hpp"

namespace mots {

// Constant-velocity filter over (cx, cy, aspect, h) and their per-frame rates.
// Aspect is w / h.
using StateVector = Eigen::Matrix<double, 8, 1>;
using StateCovariance = Eigen::Matrix<double, 8, 8>;

struct KalmanState {
  StateVector mean = StateVector::Zero();
  StateCovariance covariance = StateCovariance::Identity();
};

// Noise model: standard deviations scale with the box height.
struct KalmanNoise {
  static constexpr double kPositionWeight = 1.0 / 20.0;
  static constexpr double kVelocityWeight = 1.0 / 160.0;
  static constexpr double kAspectStd = 1e-2;
  static constexpr double kAspectVelocityStd = 1e-5;
  static constexpr double kAspectMeasurementStd = 1e-1;
};

KalmanState initiate(const BoundingBox& box);
KalmanState predict(const KalmanState& state);
KalmanState update(const KalmanState& state, const BoundingBox& measurement);

// Throws DegenerateState when height or aspect is not positive.
BoundingBox state_to_bbox(const KalmanState& state);

}  // namespace mots
