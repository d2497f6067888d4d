#include <random>

#include <gtest/gtest.h>

#include "mots/kernels.hpp"
#include "mots/lifecycle.hpp"
#include "mots/stage2.hpp"
#include "oracles.hpp"

namespace mots {
namespace {

std::vector<BoundingBox> random_boxes(std::mt19937_64& rng, std::size_t n) {
  std::vector<BoundingBox> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(testing::random_box(rng, 400.0));
  return out;
}

TEST(Kernels, IouMatrixParallelEqualsReference) {
  std::mt19937_64 rng(61);
  for (std::size_t m : {0u, 1u, 7u, 90u, 250u}) {
    for (std::size_t n : {0u, 3u, 64u, 300u}) {
      const auto tracks = random_boxes(rng, m);
      const auto dets = random_boxes(rng, n);
      const Matrix fast = build_iou_matrix(tracks, dets);
      const Matrix slow = reference::build_iou_matrix(tracks, dets);
      ASSERT_EQ(fast.rows(), m);
      ASSERT_EQ(fast.cols(), n);
      ASSERT_EQ(fast, slow) << m << "x" << n;
    }
  }
}

TEST(Kernels, IouMatrixEntriesMatchPairwiseIou) {
  std::mt19937_64 rng(62);
  const auto tracks = random_boxes(rng, 80);
  const auto dets = random_boxes(rng, 120);
  const Matrix m = build_iou_matrix(tracks, dets);
  for (std::size_t j = 0; j < tracks.size(); ++j)
    for (std::size_t i = 0; i < dets.size(); ++i) ASSERT_EQ(m(j, i), iou(tracks[j], dets[i]));
}

TEST(Kernels, SimilarityMatrixParallelEqualsReference) {
  std::mt19937_64 rng(63);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const LifecycleConfig cfg;
  auto embedding = [&](std::size_t dim) {
    std::vector<float> v(dim);
    for (auto& x : v) x = static_cast<float>(gauss(rng));
    normalize_embedding(v);
    return v;
  };
  for (std::size_t m : {0u, 5u, 120u}) {
    for (std::size_t n : {0u, 9u, 200u}) {
      std::vector<Detection> det_store(n);
      for (std::size_t i = 0; i < n; ++i) {
        det_store[i].frame = 50;
        det_store[i].source_index = static_cast<int>(i);
        det_store[i].embedding = embedding(64);
      }
      std::vector<Track> track_store;
      for (std::size_t j = 0; j < m; ++j) {
        Detection seed;
        seed.frame = 1;
        seed.embedding = embedding(64);
        Track t = start_track(j + 1, seed, cfg);
        for (int g = 0; g < 4; ++g) {
          seed.frame = 2 + g;
          seed.embedding = embedding(64);
          on_match(t, seed, cfg);
        }
        track_store.push_back(std::move(t));
      }
      std::vector<const Track*> tracks;
      std::vector<const Detection*> dets;
      for (const auto& t : track_store) tracks.push_back(&t);
      for (const auto& d : det_store) dets.push_back(&d);
      const CosineProvider provider;
      const Matrix fast = build_similarity_matrix(tracks, dets, provider);
      const Matrix slow = reference::build_similarity_matrix(tracks, dets, provider);
      ASSERT_EQ(fast, slow) << m << "x" << n;
      for (double v : fast.values()) {
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
      }
    }
  }
}

}  // namespace
}  // namespace mots
