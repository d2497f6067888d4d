#include "mots/kalman.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "mots/errors.hpp"

namespace mots {
namespace {

using MeasurementVector = Eigen::Matrix<double, 4, 1>;
using MeasurementMatrix = Eigen::Matrix<double, 4, 8>;

MeasurementVector to_measurement(const BoundingBox& box) {
  return {box.center_x(), box.center_y(), box.w() / box.h(), box.h()};
}

StateCovariance transition() {
  StateCovariance f = StateCovariance::Identity();
  for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
  return f;
}

MeasurementMatrix projection() {
  MeasurementMatrix h = MeasurementMatrix::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
  return h;
}

}  // namespace

KalmanState initiate(const BoundingBox& box) {
  KalmanState state;
  state.mean.head<4>() = to_measurement(box);
  state.mean.tail<4>().setZero();

  const double h = box.h();
  const double pos = 2.0 * KalmanNoise::kPositionWeight * h;
  const double vel = 10.0 * KalmanNoise::kVelocityWeight * h;
  StateVector std_dev;
  std_dev << pos, pos, KalmanNoise::kAspectStd, pos, vel, vel,
      KalmanNoise::kAspectVelocityStd, vel;
  state.covariance = std_dev.array().square().matrix().asDiagonal();
  return state;
}

KalmanState predict(const KalmanState& state) {
  static const StateCovariance f = transition();
  const double h = state.mean(3);
  const double pos = KalmanNoise::kPositionWeight * h;
  const double vel = KalmanNoise::kVelocityWeight * h;
  StateVector std_dev;
  std_dev << pos, pos, KalmanNoise::kAspectStd, pos, vel, vel,
      KalmanNoise::kAspectVelocityStd, vel;
  const StateCovariance q = std_dev.array().square().matrix().asDiagonal();

  KalmanState out;
  out.mean = f * state.mean;
  out.covariance = f * state.covariance * f.transpose() + q;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  return out;
}

KalmanState update(const KalmanState& state, const BoundingBox& measurement) {
  static const MeasurementMatrix hmat = projection();
  const double h = state.mean(3);
  const double pos = KalmanNoise::kPositionWeight * h;
  Eigen::Matrix<double, 4, 1> std_dev(pos, pos, KalmanNoise::kAspectMeasurementStd, pos);
  const Eigen::Matrix4d r = std_dev.array().square().matrix().asDiagonal();

  const Eigen::Matrix4d s = hmat * state.covariance * hmat.transpose() + r;
  const Eigen::Matrix<double, 8, 4> pht = state.covariance * hmat.transpose();
  // K = P H^T S^-1, solved through the Cholesky factor of S.
  const Eigen::Matrix<double, 8, 4> gain =
      s.llt().solve(pht.transpose()).transpose();
  const MeasurementVector innovation = to_measurement(measurement) - hmat * state.mean;

  KalmanState out;
  out.mean = state.mean + gain * innovation;
  out.covariance = state.covariance - gain * s * gain.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  return out;
}

BoundingBox state_to_bbox(const KalmanState& state) {
  const double aspect = state.mean(2);
  const double h = state.mean(3);
  if (!(h > 0.0) || !(aspect > 0.0)) {
    throw DegenerateState("kalman state has non-positive height or aspect");
  }
  return BoundingBox::from_center(state.mean(0), state.mean(1), aspect * h, h);
}

}  // namespace mots
