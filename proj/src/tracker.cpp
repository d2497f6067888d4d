#include "mots/tracker.hpp"

#include <algorithm>
#include <chrono>

#include "mots/errors.hpp"
#include "mots/hungarian.hpp"
#include "mots/kernels.hpp"
#include "mots/lifecycle.hpp"
#include "mots/log.hpp"
#include "mots/stage1.hpp"

namespace mots {
namespace {

bool is_degenerate(const KalmanState& s) { return !(s.mean(2) > 0.0) || !(s.mean(3) > 0.0); }

}  // namespace

Tracker::Tracker(TrackerConfig cfg, const SimilarityProvider* provider)
    : cfg_(std::move(cfg)), provider_(provider) {
  cfg_.lifecycle.iou_window = cfg_.stage1.t_n1;
  cfg_.validate();
}

AssociationResult Tracker::run_stage1(const Matrix& raw_iou) {
  switch (cfg_.stage1_mode) {
    case Stage1Mode::Adaptive: {
      std::vector<double> bases;
      bases.reserve(tracks_.size());
      for (const Track& t : tracks_) bases.push_back(t.motion.base_iou);
      return adaptive_match(clamp_and_normalize(raw_iou, bases, cfg_.stage1), cfg_.stage1);
    }
    case Stage1Mode::Hungarian: {
      AssignmentProblem problem{Matrix(raw_iou.rows(), raw_iou.cols()), cfg_.baseline_gate};
      for (std::size_t j = 0; j < raw_iou.rows(); ++j)
        for (std::size_t i = 0; i < raw_iou.cols(); ++i) problem.cost(j, i) = 1.0 - raw_iou(j, i);
      return hungarian_solve(problem);
    }
    case Stage1Mode::Off:
      break;
  }
  throw Error("stage 1 is disabled");
}

void Tracker::apply_match(Track& track, const Detection& detection, double raw_iou) {
  const double matched_iou =
      record_matched_iou(track.motion.last_iou, raw_iou, false, cfg_.stage1);
  track.motion = update_base_iou(std::move(track.motion), matched_iou, cfg_.stage1);
  track.motion.last_iou = matched_iou;
  on_match(track, detection, cfg_.lifecycle);
}

std::vector<TrajectoryRow> Tracker::step(int frame, std::span<const Detection> detections) {
  FrameStats stats;
  stats.detections = detections.size();

  for (Track& t : tracks_) {
    t.kalman = predict(t.kalman);
    if (is_degenerate(t.kalman)) {
      log::debug("frame {}: track {} collapsed during prediction", frame, t.id);
      t.status = TrackStatus::Deleted;
    }
  }
  std::erase_if(tracks_, [](const Track& t) { return t.status == TrackStatus::Deleted; });

  std::vector<const Detection*> dets;
  dets.reserve(detections.size());
  for (const Detection& d : detections) {
    if (d.confidence >= cfg_.min_confidence) {
      dets.push_back(&d);
    } else {
      ++stats.discarded;
    }
  }
  stats.active_tracks = tracks_.size();

  std::vector<BoundingBox> predicted, det_boxes;
  predicted.reserve(tracks_.size());
  det_boxes.reserve(dets.size());
  for (const Track& t : tracks_) predicted.push_back(track_box(t));
  for (const Detection* d : dets) det_boxes.push_back(d->bbox);

  // Stage 2 alone never looks at overlap, so the full IOU matrix is only
  // built when stage 1 runs; matched pairs get their IOU on demand.
  Matrix raw_iou;
  if (cfg_.stage1_mode != Stage1Mode::Off) raw_iou = build_iou_matrix(predicted, det_boxes);
  const auto pair_iou = [&](std::size_t j, std::size_t i) {
    return raw_iou.empty() ? iou(predicted[j], det_boxes[i]) : raw_iou(j, i);
  };

  AssociationResult first;
  if (cfg_.stage1_mode == Stage1Mode::Off) {
    fill_unmatched(first, tracks_.size(), dets.size());
  } else {
    first = run_stage1(raw_iou);
  }
  stats.stage1_matched = first.matches.size();

  std::vector<std::pair<std::size_t, std::size_t>> matches = first.matches;
  std::vector<std::size_t> left_tracks = first.unmatched_tracks;
  std::vector<std::size_t> left_dets = first.unmatched_detections;

  if (provider_ && !left_tracks.empty() && !left_dets.empty()) {
    std::vector<const Track*> hard_tracks;
    std::vector<const Detection*> hard_dets;
    for (auto j : left_tracks) hard_tracks.push_back(&tracks_[j]);
    for (auto i : left_dets) hard_dets.push_back(dets[i]);
    const AssociationResult second =
        fine_match(build_similarity_matrix(hard_tracks, hard_dets, *provider_), cfg_.stage2);
    for (const auto& [r, c] : second.matches) matches.emplace_back(left_tracks[r], left_dets[c]);
    std::vector<std::size_t> still_tracks, still_dets;
    for (auto r : second.unmatched_tracks) still_tracks.push_back(left_tracks[r]);
    for (auto c : second.unmatched_detections) still_dets.push_back(left_dets[c]);
    left_tracks = std::move(still_tracks);
    left_dets = std::move(still_dets);
    stats.stage2_matched = second.matches.size();
  }

  for (const auto& [j, i] : matches) apply_match(tracks_[j], *dets[i], pair_iou(j, i));
  for (auto j : left_tracks) on_miss(tracks_[j], cfg_.lifecycle);

  std::sort(left_dets.begin(), left_dets.end());
  for (auto i : left_dets) {
    Track track = start_track(next_id_++, *dets[i], cfg_.lifecycle);
    const double init_iou = record_matched_iou(0.0, 0.0, true, cfg_.stage1);
    track.motion = update_base_iou(std::move(track.motion), init_iou, cfg_.stage1);
    track.motion.last_iou = init_iou;
    tracks_.push_back(std::move(track));
  }
  stats.seeded = left_dets.size();
  std::erase_if(tracks_, [](const Track& t) { return t.status == TrackStatus::Deleted; });

  counters_.total_matchs_num += stats.stage1_matched;
  counters_.total_detects_num += dets.size();
  counters_.total_tracks_num += stats.active_tracks;
  last_frame_ = stats;
  return report(frame);
}

std::vector<TrajectoryRow> Tracker::report(int frame) const {
  std::vector<TrajectoryRow> rows;
  for (const Track& t : tracks_) {
    const bool live = t.status == TrackStatus::Confirmed && t.time_since_update == 0;
    const bool coasting = t.status == TrackStatus::TemporarilyLost &&
                          t.lost_kind == LostKind::TemporarilyLost &&
                          t.time_since_update <= cfg_.max_coast;
    if (!live && !coasting) continue;
    rows.push_back({frame, static_cast<std::int64_t>(t.id), track_box(t)});
  }
  std::sort(rows.begin(), rows.end(),
            [](const TrajectoryRow& a, const TrajectoryRow& b) { return a.id < b.id; });
  return rows;
}

std::unique_ptr<SimilarityProvider> make_provider(const TrackerConfig& cfg) {
  switch (cfg.stage2_mode) {
    case Stage2Mode::Cosine:
      return std::make_unique<CosineProvider>();
    case Stage2Mode::Precomputed:
      return std::make_unique<PrecomputedProvider>(PrecomputedProvider::load(cfg.scores_path));
    case Stage2Mode::Off:
      break;
  }
  return nullptr;
}

SequenceResult run_sequence(const SequenceInput& input, const TrackerConfig& cfg,
                            const SimilarityProvider* provider) {
  Tracker tracker(cfg, provider);
  SequenceResult result;
  using Clock = std::chrono::steady_clock;
  for (std::size_t k = 0; k < input.frames.size(); ++k) {
    const int frame = static_cast<int>(k + 1);
    const auto start = Clock::now();
    std::vector<TrajectoryRow> rows;
    try {
      rows = tracker.step(frame, input.frames[k]);
    } catch (const Error& e) {
      throw Error("frame " + std::to_string(frame) + ": " + e.what());
    }
    result.association_seconds += std::chrono::duration<double>(Clock::now() - start).count();
    result.trajectories.insert(result.trajectories.end(), rows.begin(), rows.end());
  }
  result.frames = input.frames.size();
  result.counters = tracker.counters();
  result.tracks_created = tracker.tracks_created();
  return result;
}

void attach_run_stats(MetricsReport& report, const SequenceResult& run, Stage1Mode mode) {
  if (mode != Stage1Mode::Off && run.counters.total_detects_num > 0) {
    const CoverageRatios ratios = coverage_ratios(run.counters);
    report.m_det = ratios.m_det;
    report.m_track = ratios.m_track;
  }
  report.fps = run.fps();
}

}  // namespace mots
