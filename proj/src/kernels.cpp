#include "mots/kernels.hpp"

namespace mots {

Matrix build_iou_matrix(std::span<const BoundingBox> tracks,
                        std::span<const BoundingBox> detections) {
  // Even a one-thread team costs a fork/join, so small frames skip OpenMP.
  if (tracks.size() * detections.size() < kParallelMinCells)
    return reference::build_iou_matrix(tracks, detections);
  Matrix out(tracks.size(), detections.size());
  const auto rows = static_cast<std::ptrdiff_t>(tracks.size());
  const std::size_t cols = detections.size();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < rows; ++j) {
    for (std::size_t i = 0; i < cols; ++i) out(j, i) = iou(tracks[j], detections[i]);
  }
  return out;
}

namespace reference {

Matrix build_iou_matrix(std::span<const BoundingBox> tracks,
                        std::span<const BoundingBox> detections) {
  Matrix out(tracks.size(), detections.size());
  for (std::size_t j = 0; j < tracks.size(); ++j)
    for (std::size_t i = 0; i < detections.size(); ++i)
      out(j, i) = iou(tracks[j], detections[i]);
  return out;
}

}  // namespace reference
}  // namespace mots
