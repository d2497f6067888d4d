#include "mots/lifecycle.hpp"

#include <cmath>

#include "mots/errors.hpp"
#include "mots/kalman.hpp"

namespace mots {
namespace {

void push_center(Track& track, Point2 center) {
  auto& hist = track.motion.center_history;
  hist.push(center);
  if (hist.size() < 2) {
    track.motion.mean_velocity.reset();
    return;
  }
  const Point2 first = hist[0];
  const Point2 last = hist.back();
  const double steps = static_cast<double>(hist.size() - 1);
  track.motion.mean_velocity = Point2{(last.x - first.x) / steps, (last.y - first.y) / steps};
}

bool exits_along(double position, double extent, double velocity, double factor) {
  if (velocity > 0.0) return extent - position <= factor * velocity;
  if (velocity < 0.0) return position <= factor * -velocity;
  return false;
}

}  // namespace

void LifecycleConfig::validate() const {
  if (init_hits < 1) throw ConfigError("lifecycle.init_hits must be >= 1");
  if (t_n2 < 1) throw ConfigError("lifecycle.t_n2 must be >= 1");
  if (!(throd_del1 > throd_del2 && throd_del2 >= 1))
    throw ConfigError("lifecycle requires throd_del1 > throd_del2 >= 1");
  if (!(boundary_factor > 0.0)) throw ConfigError("lifecycle.boundary_factor must be positive");
  if (max_age < 1) throw ConfigError("lifecycle.max_age must be >= 1");
  if (gallery_size < 1) throw ConfigError("lifecycle.gallery_size must be >= 1");
  if (image_size && !(image_size->width > 0.0 && image_size->height > 0.0))
    throw ConfigError("image size must be positive");
}

Track start_track(std::uint64_t id, const Detection& detection, const LifecycleConfig& cfg) {
  Track track;
  track.id = id;
  track.kalman = initiate(detection.bbox);
  track.status = cfg.init_hits <= 1 ? TrackStatus::Confirmed : TrackStatus::Tentative;
  track.hits = 1;
  track.time_since_update = 0;
  track.motion = TrackMotionStats(cfg.iou_window, cfg.t_n2);
  track.gallery = RingBuffer<GalleryEntry>(cfg.gallery_size);
  push_center(track, {detection.bbox.center_x(), detection.bbox.center_y()});
  track.gallery.push({detection.frame, detection.source_index, detection.embedding});
  return track;
}

BoundingBox track_box(const Track& track) { return state_to_bbox(track.kalman); }

void on_match(Track& track, const Detection& detection, const LifecycleConfig& cfg) {
  track.kalman = update(track.kalman, detection.bbox);
  ++track.hits;
  track.time_since_update = 0;
  track.lost_kind = LostKind::TemporarilyLost;
  if (track.status == TrackStatus::TemporarilyLost ||
      (track.status == TrackStatus::Tentative && track.hits >= cfg.init_hits)) {
    track.status = TrackStatus::Confirmed;
  }
  push_center(track, {detection.bbox.center_x(), detection.bbox.center_y()});
  track.gallery.push({detection.frame, detection.source_index, detection.embedding});
}

LostKind classify_lost(const Track& track, const LifecycleConfig& cfg) {
  if (!cfg.image_size || !track.motion.mean_velocity) return LostKind::TemporarilyLost;
  const Point2 v = *track.motion.mean_velocity;
  const double cx = track.kalman.mean(0);
  const double cy = track.kalman.mean(1);
  if (exits_along(cx, cfg.image_size->width, v.x, cfg.boundary_factor) ||
      exits_along(cy, cfg.image_size->height, v.y, cfg.boundary_factor)) {
    return LostKind::Exiting;
  }
  return LostKind::TemporarilyLost;
}

void on_miss(Track& track, const LifecycleConfig& cfg) {
  if (track.status == TrackStatus::Deleted) return;
  ++track.time_since_update;
  track.hits = 0;
  if (track.status == TrackStatus::Tentative) {
    track.status = TrackStatus::Deleted;
    return;
  }
  track.status = TrackStatus::TemporarilyLost;
  // While lost, the predicted center stands in for the observation.
  push_center(track, {track.kalman.mean(0), track.kalman.mean(1)});

  if (!cfg.mv_aware) {
    track.lost_kind = LostKind::TemporarilyLost;
    if (track.time_since_update > cfg.max_age) track.status = TrackStatus::Deleted;
    return;
  }
  track.lost_kind = classify_lost(track, cfg);
  const int budget = track.lost_kind == LostKind::Exiting ? cfg.throd_del2 : cfg.throd_del1;
  if (track.time_since_update > budget) track.status = TrackStatus::Deleted;
}

}  // namespace mots
