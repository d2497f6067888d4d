#include "mots/types.hpp"

#include <cmath>

namespace mots {

bool normalize_embedding(std::vector<float>& v) {
  double sq = 0.0;
  for (float x : v) sq += static_cast<double>(x) * x;
  if (!(sq > 0.0) || !std::isfinite(sq)) return false;
  const double inv = 1.0 / std::sqrt(sq);
  for (float& x : v) x = static_cast<float>(x * inv);
  return true;
}

std::string_view to_string(TrackStatus status) {
  switch (status) {
    case TrackStatus::Tentative: return "tentative";
    case TrackStatus::Confirmed: return "confirmed";
    case TrackStatus::TemporarilyLost: return "lost";
    case TrackStatus::Deleted: return "deleted";
  }
  return "unknown";
}

void fill_unmatched(AssociationResult& result, std::size_t num_tracks,
                    std::size_t num_detections) {
  std::vector<char> track_used(num_tracks, 0), det_used(num_detections, 0);
  for (const auto& [t, d] : result.matches) {
    track_used[t] = 1;
    det_used[d] = 1;
  }
  result.unmatched_tracks.clear();
  result.unmatched_detections.clear();
  for (std::size_t t = 0; t < num_tracks; ++t)
    if (!track_used[t]) result.unmatched_tracks.push_back(t);
  for (std::size_t d = 0; d < num_detections; ++d)
    if (!det_used[d]) result.unmatched_detections.push_back(d);
}

bool is_partition(const AssociationResult& result, std::size_t num_tracks,
                  std::size_t num_detections) {
  std::vector<int> track_seen(num_tracks, 0), det_seen(num_detections, 0);
  for (const auto& [t, d] : result.matches) {
    if (t >= num_tracks || d >= num_detections) return false;
    ++track_seen[t];
    ++det_seen[d];
  }
  for (auto t : result.unmatched_tracks) {
    if (t >= num_tracks) return false;
    ++track_seen[t];
  }
  for (auto d : result.unmatched_detections) {
    if (d >= num_detections) return false;
    ++det_seen[d];
  }
  for (int c : track_seen)
    if (c != 1) return false;
  for (int c : det_seen)
    if (c != 1) return false;
  return true;
}

}  // namespace mots
