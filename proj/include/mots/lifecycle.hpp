#pragma once

#include <cstdint>
#include <optional>

#include "mots/geometry.hpp"
#include "mots/types.hpp"

namespace mots {

struct LifecycleConfig {
  int init_hits = 2;         // consecutive hits before a track is confirmed
  std::size_t t_n2 = 5;      // displacements averaged into the mean velocity
  int throd_del1 = 30;       // misses tolerated for a temporarily lost track
  int throd_del2 = 3;        // misses tolerated for an exiting track
  double boundary_factor = 2.0;
  bool mv_aware = true;
  int max_age = 30;          // single miss budget when mv_aware is off
  std::size_t gallery_size = 10;
  std::size_t iou_window = 5;  // mirrors Stage1Config::t_n1
  std::optional<ImageSize> image_size;

  void validate() const;
};

// New Tentative track seeded from an unmatched detection.
Track start_track(std::uint64_t id, const Detection& detection, const LifecycleConfig& cfg);

// Box the track currently predicts (Kalman mean).
BoundingBox track_box(const Track& track);

// Kalman correction plus bookkeeping for a matched track.
void on_match(Track& track, const Detection& detection, const LifecycleConfig& cfg);

// Per-axis test: a track is Exiting when, along the axis its velocity
// points, the distance from its center to that image edge is at most
// boundary_factor times the speed on that axis. Tracks without a velocity
// estimate or without image bounds are TemporarilyLost.
LostKind classify_lost(const Track& track, const LifecycleConfig& cfg);

// Miss bookkeeping; sets status to Deleted when the miss budget is spent.
// Tentative tracks are deleted on their first miss.
void on_miss(Track& track, const LifecycleConfig& cfg);

}  // namespace mots
