#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mots/config.hpp"
#include "mots/io.hpp"
#include "mots/metrics.hpp"
#include "mots/stage2.hpp"
#include "mots/types.hpp"

namespace mots {

// Where each input detection of a frame ended up. The four counts always
// sum to `detections`.
struct FrameStats {
  std::size_t detections = 0;
  std::size_t discarded = 0;  // below min_confidence
  std::size_t stage1_matched = 0;
  std::size_t stage2_matched = 0;
  std::size_t seeded = 0;     // started a new track
  std::size_t active_tracks = 0;  // tracks entering association
};

// Online two-stage tracker. One instance per sequence; frames must be fed
// in order.
class Tracker {
 public:
  // `provider` may be null, which disables stage 2. It must outlive the tracker.
  Tracker(TrackerConfig cfg, const SimilarityProvider* provider);

  // Runs one frame and returns the rows to report for it.
  std::vector<TrajectoryRow> step(int frame, std::span<const Detection> detections);

  const std::vector<Track>& tracks() const { return tracks_; }
  const Stage1Counters& counters() const { return counters_; }
  const FrameStats& last_frame() const { return last_frame_; }
  std::uint64_t tracks_created() const { return next_id_ - 1; }

 private:
  AssociationResult run_stage1(const Matrix& raw_iou);
  void apply_match(Track& track, const Detection& detection, double raw_iou);
  std::vector<TrajectoryRow> report(int frame) const;

  TrackerConfig cfg_;
  const SimilarityProvider* provider_;
  std::vector<Track> tracks_;
  std::uint64_t next_id_ = 1;
  Stage1Counters counters_;
  FrameStats last_frame_;
};

struct SequenceResult {
  std::vector<TrajectoryRow> trajectories;
  Stage1Counters counters;
  double association_seconds = 0.0;
  std::size_t frames = 0;
  std::uint64_t tracks_created = 0;

  double fps() const {
    return association_seconds > 0.0 ? static_cast<double>(frames) / association_seconds : 0.0;
  }
};

// Builds the stage-2 provider the config asks for, or null when stage 2 is off.
std::unique_ptr<SimilarityProvider> make_provider(const TrackerConfig& cfg);

SequenceResult run_sequence(const SequenceInput& input, const TrackerConfig& cfg,
                            const SimilarityProvider* provider);

// Fills coverage ratios and FPS of a sequence run into a metrics report.
void attach_run_stats(MetricsReport& report, const SequenceResult& run, Stage1Mode mode);

}  // namespace mots
