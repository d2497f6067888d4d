#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "mots/geometry.hpp"

namespace mots {

// One box of a trajectory: a row of a MOT gt or result file.
struct TrajectoryRow {
  int frame = 0;
  std::int64_t id = 0;
  BoundingBox bbox;

  bool operator==(const TrajectoryRow&) const = default;
};

struct Stage1Counters {
  std::uint64_t total_matchs_num = 0;   // stage-1 matches
  std::uint64_t total_detects_num = 0;  // detections entering association
  std::uint64_t total_tracks_num = 0;   // active-track instances entering association
};

struct CoverageRatios {
  double m_det = 0.0;
  double m_track = 0.0;
};

// Throws EmptySequence when no detections were counted. m_track is 0 when
// no tracks were ever active.
CoverageRatios coverage_ratios(const Stage1Counters& counters);

struct MetricsReport {
  double mota = 0.0;
  double motp = 0.0;  // mean IOU of matched pairs
  double idf1 = 0.0;
  std::uint64_t mt = 0;
  std::uint64_t pt = 0;
  std::uint64_t ml = 0;
  std::uint64_t ids = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t num_gt = 0;
  std::uint64_t num_hyp = 0;
  std::uint64_t num_matches = 0;
  std::uint64_t num_gt_ids = 0;
  std::uint64_t idtp = 0;
  // Absent when stage 1 did not run; printed as "\".
  std::optional<double> m_det;
  std::optional<double> m_track;
  std::optional<double> fps;
};

struct EvalConfig {
  double iou_gate = 0.5;
  double mostly_tracked = 0.8;
  double mostly_lost = 0.2;
};

// CLEAR-MOT and identity metrics. Per frame, correspondences from the
// previous frame are kept while their IOU still reaches the gate; the rest
// are assigned by Hungarian on 1 - IOU. IDF1 uses the global one-to-one
// identity matching that maximizes frames with IOU >= gate.
// Throws FormatError when a frame holds duplicate ids.
MetricsReport evaluate(const std::vector<TrajectoryRow>& gt,
                       const std::vector<TrajectoryRow>& hyp, const EvalConfig& cfg = {});

// Fixed-width table; MOTA, IDF1, MOTP and the coverage ratios in percent.
void print_report(std::ostream& os, const MetricsReport& report);
void print_report_header(std::ostream& os, std::string_view label = {});
void print_report_row(std::ostream& os, const MetricsReport& report, std::string_view label = {});
// `name=value`, one metric per line.
void write_key_values(std::ostream& os, const MetricsReport& report);

}  // namespace mots
