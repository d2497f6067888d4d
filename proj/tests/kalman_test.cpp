#include <cmath>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "mots/errors.hpp"
#include "mots/kalman.hpp"
#include "oracles.hpp"

namespace mots {
namespace {

void expect_symmetric_psd(const StateCovariance& p) {
  EXPECT_LE((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-9);
  const Eigen::SelfAdjointEigenSolver<StateCovariance> eig(p);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-9);
}

TEST(Kalman, InitiateZeroVelocity) {
  const KalmanState s = initiate(BoundingBox(0, 0, 10, 20));
  StateVector expected;
  expected << 5, 10, 0.5, 20, 0, 0, 0, 0;
  EXPECT_LE((s.mean - expected).cwiseAbs().maxCoeff(), 1e-12);
  expect_symmetric_psd(s.covariance);
}

TEST(Kalman, InitiateCenterArithmetic) {
  const KalmanState s = initiate(BoundingBox(100, 50, 40, 80));
  StateVector expected;
  expected << 120, 90, 0.5, 80, 0, 0, 0, 0;
  EXPECT_LE((s.mean - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Kalman, PredictZeroVelocityKeepsPosition) {
  const KalmanState s = initiate(BoundingBox(0, 0, 10, 20));
  const KalmanState p = predict(s);
  EXPECT_DOUBLE_EQ(p.mean(0), 5.0);
  EXPECT_DOUBLE_EQ(p.mean(1), 10.0);
}

TEST(Kalman, PredictLinearTransition) {
  KalmanState s = initiate(BoundingBox(0, 0, 10, 20));
  s.mean << 5, 10, 0.5, 20, 2, 1, 0, 0;
  const KalmanState p = predict(s);
  EXPECT_DOUBLE_EQ(p.mean(0), 7.0);
  EXPECT_DOUBLE_EQ(p.mean(1), 11.0);
  EXPECT_GT(p.covariance.trace(), s.covariance.trace());
  expect_symmetric_psd(p.covariance);
}

TEST(Kalman, UpdateWithPredictedBoxKeepsMean) {
  const KalmanState p = predict(initiate(BoundingBox(30, 40, 20, 50)));
  const KalmanState u = update(p, state_to_bbox(p));
  EXPECT_LE((u.mean.head<4>() - p.mean.head<4>()).cwiseAbs().maxCoeff(), 1e-9);
  for (int k = 0; k < 4; ++k) EXPECT_LE(u.covariance(k, k), p.covariance(k, k));
  expect_symmetric_psd(u.covariance);
}

// Scalar two-state (position, velocity) filter along cx with the same
// height-scaled noise constants, written independently of the library.
struct ScalarKf {
  double x = 0, v = 0;
  double p00 = 0, p01 = 0, p11 = 0;
  double h = 0;

  void init(double z, double height) {
    h = height;
    x = z;
    v = 0;
    p00 = std::pow(2.0 * h / 20.0, 2);
    p11 = std::pow(10.0 * h / 160.0, 2);
    p01 = 0;
  }
  void predict() {
    x += v;
    const double n00 = p00 + 2 * p01 + p11 + std::pow(h / 20.0, 2);
    const double n01 = p01 + p11;
    const double n11 = p11 + std::pow(h / 160.0, 2);
    p00 = n00;
    p01 = n01;
    p11 = n11;
  }
  void update(double z) {
    const double s = p00 + std::pow(h / 20.0, 2);
    const double k0 = p00 / s, k1 = p01 / s;
    const double innov = z - x;
    x += k0 * innov;
    v += k1 * innov;
    const double n00 = p00 - k0 * s * k0;
    const double n01 = p01 - k0 * s * k1;
    const double n11 = p11 - k1 * s * k1;
    p00 = n00;
    p01 = n01;
    p11 = n11;
  }
};

TEST(Kalman, TwoUpdatesThenPredictMatchesScalarOracle) {
  const double h = 20.0;
  KalmanState s = initiate(BoundingBox::from_center(0.0, 50.0, 10.0, h));
  s = predict(s);
  s = update(s, BoundingBox::from_center(2.0, 50.0, 10.0, h));
  s = predict(s);

  ScalarKf ref;
  ref.init(0.0, h);
  ref.predict();
  ref.update(2.0);
  ref.predict();

  EXPECT_NEAR(s.mean(0), ref.x, 1e-9);
  EXPECT_NEAR(s.mean(4), ref.v, 1e-9);
  EXPECT_NEAR(s.covariance(0, 0), ref.p00, 1e-9);
  EXPECT_GT(s.mean(0), 2.0);
  EXPECT_LE(s.mean(0), 4.0);
}

TEST(Kalman, StateToBboxInvertsInitiate) {
  const KalmanState s = initiate(BoundingBox(0, 0, 10, 20));
  EXPECT_EQ(state_to_bbox(s), BoundingBox(0, 0, 10, 20));
}

TEST(Kalman, StateToBboxWidthIsAspectTimesHeight) {
  KalmanState s;
  s.mean << 50, 50, 2.0, 10, 0, 0, 0, 0;
  EXPECT_DOUBLE_EQ(state_to_bbox(s).w(), 20.0);
}

TEST(Kalman, DegenerateStateThrows) {
  KalmanState s;
  s.mean << 50, 50, 0.5, 0.0, 0, 0, 0, 0;
  EXPECT_THROW(state_to_bbox(s), DegenerateState);
  s.mean << 50, 50, -0.1, 10.0, 0, 0, 0, 0;
  EXPECT_THROW(state_to_bbox(s), DegenerateState);
}

TEST(KalmanProperty, RoundTripIsIdentity) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 5000; ++k) {
    const BoundingBox b = testing::random_box(rng, 2000.0);
    const BoundingBox r = state_to_bbox(initiate(b));
    EXPECT_NEAR(r.x(), b.x(), 1e-9);
    EXPECT_NEAR(r.y(), b.y(), 1e-9);
    EXPECT_NEAR(r.w(), b.w(), 1e-9);
    EXPECT_NEAR(r.h(), b.h(), 1e-9);
  }
}

TEST(KalmanProperty, CovarianceStaysSymmetricPsd) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> noise(0.0, 2.0);
  KalmanState s = initiate(BoundingBox(100, 100, 40, 90));
  for (int t = 0; t < 300; ++t) {
    s = predict(s);
    expect_symmetric_psd(s.covariance);
    if (t % 7 != 3) {
      s = update(s, BoundingBox(100 + 3.0 * t + noise(rng), 100 + t + noise(rng), 40, 90));
      expect_symmetric_psd(s.covariance);
    }
  }
}

TEST(KalmanProperty, PredictionErrorShrinksOnNoiselessLine) {
  // Box moves 4 px/frame right and 1.5 px/frame down, measured exactly.
  auto truth = [](int t) { return BoundingBox(10.0 + 4.0 * t, 20.0 + 1.5 * t, 30, 60); };
  KalmanState s = initiate(truth(0));
  double prev_err = INFINITY;
  for (int t = 1; t < 60; ++t) {
    s = predict(s);
    const double err =
        std::hypot(s.mean(0) - truth(t).center_x(), s.mean(1) - truth(t).center_y());
    if (t > 3) {
      EXPECT_LE(err, prev_err + 1e-12) << "frame " << t;
    }
    prev_err = err;
    s = update(s, truth(t));
  }
  EXPECT_LT(prev_err, 0.05);
}

}  // namespace
}  // namespace mots
