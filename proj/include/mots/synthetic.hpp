#pragma once

#include <cstdint>
#include <vector>

#include "mots/geometry.hpp"
#include "mots/io.hpp"
#include "mots/metrics.hpp"

namespace mots {

struct SyntheticParams {
  int num_targets = 20;
  int num_frames = 300;
  ImageSize image{1920.0, 1080.0};
  std::uint64_t seed = 1;

  double min_speed = 1.0;  // pixels/frame
  double max_speed = 4.0;
  double curved_fraction = 0.3;    // share of targets on a slowly turning heading
  double max_turn_rate = 0.01;     // radians/frame
  double jitter = 1.0;             // std of detection box noise, pixels

  double dropout = 0.10;           // target share of missing detections
  int max_gap = 4;                 // longest run of consecutive missing detections

  // With `crossing`, targets enter from one edge at staggered times and
  // leave through the opposite one; otherwise they bounce inside the image
  // for the whole sequence.
  bool crossing = false;
  int false_positives_per_frame = 0;

  std::size_t embedding_dim = 64;  // 0 disables embeddings
  double embedding_noise = 0.01;   // per-dimension std before renormalizing
};

struct SyntheticSequence {
  SequenceInput input;
  std::vector<TrajectoryRow> ground_truth;
};

// Deterministic for a fixed seed. Identity embeddings form a regular
// simplex (pairwise cosine -1/(n-1)); each observation adds isotropic noise
// and is renormalized.
SyntheticSequence generate_sequence(const SyntheticParams& params);

// Detections as MOT CSV, the embedding sidecar, and the ground truth.
void write_sequence_files(const SyntheticSequence& seq, const std::filesystem::path& dets,
                          const std::filesystem::path& gt,
                          const std::filesystem::path& embeddings);

}  // namespace mots
