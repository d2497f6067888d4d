#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "mots/geometry.hpp"
#include "mots/kalman.hpp"

namespace mots {

struct Detection {
  int frame = 0;
  BoundingBox bbox;
  double confidence = 1.0;
  // Unit L2 norm once loaded; empty when the source has no appearance features.
  std::vector<float> embedding;
  int source_index = 0;

  bool has_embedding() const { return !embedding.empty(); }
};

// Normalizes in place. Returns false for an all-zero vector, which is left untouched.
bool normalize_embedding(std::vector<float>& v);

// Fixed-capacity FIFO; pushing onto a full buffer evicts the oldest entry.
template <typename T>
class RingBuffer {
 public:
  explicit RingBuffer(std::size_t capacity = 1) : capacity_(capacity ? capacity : 1) {}

  void push(T value) {
    if (items_.size() == capacity_) items_.pop_front();
    items_.push_back(std::move(value));
  }
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  const T& back() const { return items_.back(); }
  const T& operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::size_t capacity_;
  std::deque<T> items_;
};

struct TrackMotionStats {
  TrackMotionStats(std::size_t iou_window = 5, std::size_t velocity_window = 5)
      : iou_history(iou_window), center_history(velocity_window + 1) {}

  RingBuffer<double> iou_history;
  double base_iou = 0.0;
  // Last matched-IOU value; the carry-forward source for low-overlap matches.
  double last_iou = 0.0;
  RingBuffer<Point2> center_history;
  std::optional<Point2> mean_velocity;
};

enum class TrackStatus { Tentative, Confirmed, TemporarilyLost, Deleted };
enum class LostKind { TemporarilyLost, Exiting };

std::string_view to_string(TrackStatus status);

struct GalleryEntry {
  int frame = 0;
  int det_index = 0;
  std::vector<float> embedding;
};

struct Track {
  std::uint64_t id = 0;
  KalmanState kalman;
  TrackStatus status = TrackStatus::Tentative;
  LostKind lost_kind = LostKind::TemporarilyLost;
  int hits = 0;
  int time_since_update = 0;
  TrackMotionStats motion;
  RingBuffer<GalleryEntry> gallery{10};
};

// Matcher output. Indices refer to the track and detection lists the
// matcher was given; the tracker maps them back to ids.
struct AssociationResult {
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  std::vector<std::size_t> unmatched_tracks;
  std::vector<std::size_t> unmatched_detections;
};

// Fills the unmatched lists from `matches` for an M x N problem.
void fill_unmatched(AssociationResult& result, std::size_t num_tracks,
                    std::size_t num_detections);

// True when matches are one-to-one and matches plus unmatched lists
// partition both index ranges exactly.
bool is_partition(const AssociationResult& result, std::size_t num_tracks,
                  std::size_t num_detections);

}  // namespace mots
