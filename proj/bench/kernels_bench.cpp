// Serial reference vs OpenMP kernels for the two pairwise matrices built
// every frame. Run with OMP_NUM_THREADS set to compare thread counts.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "mots/kernels.hpp"
#include "mots/lifecycle.hpp"
#include "mots/stage2.hpp"

namespace {

using mots::BoundingBox;

std::vector<BoundingBox> random_boxes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, 1800.0), size(20.0, 150.0);
  std::vector<BoundingBox> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.emplace_back(pos(rng), pos(rng), size(rng), size(rng));
  return out;
}

template <bool Parallel>
void BM_IouMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto tracks = random_boxes(n, 1);
  const auto dets = random_boxes(n, 2);
  for (auto _ : state) {
    auto m = Parallel ? mots::build_iou_matrix(tracks, dets)
                      : mots::reference::build_iou_matrix(tracks, dets);
    benchmark::DoNotOptimize(m.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

struct SimilarityFixture {
  std::vector<mots::Track> tracks;
  std::vector<mots::Detection> dets;
  std::vector<const mots::Track*> track_ptrs;
  std::vector<const mots::Detection*> det_ptrs;

  SimilarityFixture(std::size_t n, std::size_t dim) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto embedding = [&] {
      std::vector<float> v(dim);
      for (auto& x : v) x = static_cast<float>(gauss(rng));
      mots::normalize_embedding(v);
      return v;
    };
    const mots::LifecycleConfig cfg;
    for (std::size_t k = 0; k < n; ++k) {
      mots::Detection d;
      d.frame = 1;
      d.embedding = embedding();
      mots::Track t = mots::start_track(k + 1, d, cfg);
      for (int g = 2; g <= 10; ++g) {
        d.frame = g;
        d.embedding = embedding();
        mots::on_match(t, d, cfg);
      }
      tracks.push_back(std::move(t));
      d.frame = 11;
      d.source_index = static_cast<int>(k);
      d.embedding = embedding();
      dets.push_back(d);
    }
    for (const auto& t : tracks) track_ptrs.push_back(&t);
    for (const auto& d : dets) det_ptrs.push_back(&d);
  }
};

template <bool Parallel>
void BM_SimilarityMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SimilarityFixture fx(n, 128);
  const mots::CosineProvider provider;
  for (auto _ : state) {
    auto m = Parallel ? mots::build_similarity_matrix(fx.track_ptrs, fx.det_ptrs, provider)
                      : mots::reference::build_similarity_matrix(fx.track_ptrs, fx.det_ptrs,
                                                                 provider);
    benchmark::DoNotOptimize(m.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

}  // namespace

BENCHMARK(BM_IouMatrix<false>)->Name("iou_matrix/serial")->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK(BM_IouMatrix<true>)->Name("iou_matrix/omp")->RangeMultiplier(4)->Range(16, 1024)
    ->UseRealTime();
BENCHMARK(BM_SimilarityMatrix<false>)->Name("similarity_matrix/serial")->RangeMultiplier(4)
    ->Range(16, 256);
BENCHMARK(BM_SimilarityMatrix<true>)->Name("similarity_matrix/omp")->RangeMultiplier(4)
    ->Range(16, 256)->UseRealTime();

BENCHMARK_MAIN();
