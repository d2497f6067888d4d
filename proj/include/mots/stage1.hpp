#pragma once

#include <cstddef>
#include <span>

#include "mots/geometry.hpp"
#include "mots/types.hpp"

namespace mots {

struct Stage1Config {
  std::size_t t_n1 = 5;     // matched-IOU history length
  double throd_min = 0.4;   // raw IOU below this is zeroed
  double match_min = 0.85;  // minimum normalized score for a match
  double norm_cap = 2.5;    // upper clamp on normalized values

  void validate() const;
};

// Base IOU used for a track that has no nonzero matched-IOU entry yet:
// the midpoint between throd_min and 1.
double default_base_iou(const Stage1Config& cfg);

// Pushes `new_iou` into the history (evicting beyond t_n1) and recomputes
// the base as the mean of the nonzero entries. Zero entries mark the
// initialization frame or carry-forward of "no overlap yet" and are skipped;
// with no nonzero entry the base is default_base_iou().
TrackMotionStats update_base_iou(TrackMotionStats stats, double new_iou,
                                 const Stage1Config& cfg);

struct NormalizedIouMatrix {
  Matrix values;  // in [0, norm_cap]
  Matrix raw;
};

// value(j,i) = 0 if raw(j,i) < throd_min, else min(raw(j,i) / bases[j], norm_cap).
// bases.size() must equal raw.rows(); non-positive bases fall back to the default.
NormalizedIouMatrix clamp_and_normalize(const Matrix& raw, std::span<const double> bases,
                                        const Stage1Config& cfg);

// Mutual-maximum matching. (j,i) matches when it is the strict maximum of
// row j and column i, reaches match_min, and the runner-up in both its row
// and its column is below match_min. Everything else is left unmatched.
AssociationResult adaptive_match(const NormalizedIouMatrix& norm, const Stage1Config& cfg);

// Matched-IOU value for the current frame: 0 at initialization, the raw IOU
// when it reaches throd_min, otherwise the previous value carried forward.
double record_matched_iou(double prev, double raw_iou_of_match, bool is_init_frame,
                          const Stage1Config& cfg);

}  // namespace mots
