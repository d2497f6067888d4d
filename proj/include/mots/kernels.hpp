#pragma once

#include <cstddef>
#include <span>

#include "mots/geometry.hpp"

namespace mots {

// Below this many matrix cells the pairwise kernels stay on one thread;
// per-frame matrices in sparse scenes are too small to amortize a fork.
inline constexpr std::size_t kParallelMinCells = 4096;

// M x N IOU matrix, entry (j, i) = iou(tracks[j], detections[i]).
// Rows are filled in parallel when the matrix is large enough.
Matrix build_iou_matrix(std::span<const BoundingBox> tracks,
                        std::span<const BoundingBox> detections);

namespace reference {

// Serial reference kept for testing and benchmarking the parallel kernels.
Matrix build_iou_matrix(std::span<const BoundingBox> tracks,
                        std::span<const BoundingBox> detections);

}  // namespace reference

}  // namespace mots
