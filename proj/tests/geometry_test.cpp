#include <random>

#include <gtest/gtest.h>

#include "mots/errors.hpp"
#include "mots/geometry.hpp"
#include "mots/types.hpp"
#include "oracles.hpp"

namespace mots {
namespace {

TEST(BoundingBox, RejectsNonPositiveExtent) {
  EXPECT_THROW(BoundingBox(0, 0, 0, 10), InvalidBox);
  EXPECT_THROW(BoundingBox(0, 0, 10, -1), InvalidBox);
  EXPECT_THROW(BoundingBox(0, std::nan(""), 10, 10), InvalidBox);
  EXPECT_THROW(BoundingBox(0, 0, INFINITY, 10), InvalidBox);
  EXPECT_NO_THROW(BoundingBox(-5, -5, 1e-3, 1e-3));
}

TEST(BoundingBox, FromCenter) {
  const BoundingBox b = BoundingBox::from_center(5, 10, 10, 20);
  EXPECT_EQ(b, BoundingBox(0, 0, 10, 20));
  EXPECT_DOUBLE_EQ(b.center_x(), 5.0);
  EXPECT_DOUBLE_EQ(b.center_y(), 10.0);
}

TEST(Iou, IdenticalBoxesGiveOne) {
  EXPECT_EQ(iou(BoundingBox(0, 0, 10, 10), BoundingBox(0, 0, 10, 10)), 1.0);
}

TEST(Iou, DisjointBoxesGiveZero) {
  EXPECT_EQ(iou(BoundingBox(0, 0, 10, 10), BoundingBox(20, 20, 5, 5)), 0.0);
}

TEST(Iou, HalfShiftedBoxesGiveOneThird) {
  // Intersection 50, union 150.
  EXPECT_NEAR(iou(BoundingBox(0, 0, 10, 10), BoundingBox(5, 0, 10, 10)), 1.0 / 3.0, 1e-6);
}

TEST(Iou, TouchingEdgesGiveZero) {
  EXPECT_EQ(iou(BoundingBox(0, 0, 10, 10), BoundingBox(10, 0, 10, 10)), 0.0);
}

TEST(IouProperty, SymmetricBoundedAndMatchesOracle) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20000; ++k) {
    const BoundingBox a = testing::random_box(rng);
    const BoundingBox b = testing::random_box(rng);
    const double ab = iou(a, b);
    EXPECT_EQ(ab, iou(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_NEAR(ab, testing::box_overlap(a.x(), a.y(), a.w(), a.h(), b.x(), b.y(), b.w(), b.h()),
                1e-12);
    EXPECT_EQ(iou(a, a), 1.0);
  }
}

TEST(Matrix, ZeroSizedDimensionsKeepShape) {
  const Matrix m(0, 3);
  EXPECT_EQ(m.rows(), 0u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_TRUE(m.empty());
}

TEST(Embedding, NormalizesToUnitLength) {
  std::vector<float> v{3.0f, 4.0f};
  ASSERT_TRUE(normalize_embedding(v));
  EXPECT_NEAR(v[0], 0.6, 1e-6);
  EXPECT_NEAR(v[1], 0.8, 1e-6);
  std::vector<float> zero{0.0f, 0.0f};
  EXPECT_FALSE(normalize_embedding(zero));
}

TEST(RingBuffer, EvictsOldest) {
  RingBuffer<int> rb(3);
  for (int k = 1; k <= 5; ++k) rb.push(k);
  ASSERT_EQ(rb.size(), 3u);
  EXPECT_EQ(rb[0], 3);
  EXPECT_EQ(rb.back(), 5);
}

TEST(AssociationResult, FillUnmatchedBuildsPartition) {
  AssociationResult r;
  r.matches = {{0, 2}, {2, 0}};
  fill_unmatched(r, 3, 4);
  EXPECT_EQ(r.unmatched_tracks, (std::vector<std::size_t>{1}));
  EXPECT_EQ(r.unmatched_detections, (std::vector<std::size_t>{1, 3}));
  EXPECT_TRUE(is_partition(r, 3, 4));
}

TEST(AssociationResult, DetectsBrokenPartition) {
  AssociationResult r;
  r.matches = {{0, 1}, {1, 1}};
  fill_unmatched(r, 2, 2);
  EXPECT_FALSE(is_partition(r, 2, 2));
  AssociationResult missing;
  missing.matches = {{0, 0}};
  EXPECT_FALSE(is_partition(missing, 2, 1));
}

}  // namespace
}  // namespace mots
