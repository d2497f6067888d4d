#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mots/geometry.hpp"
#include "mots/metrics.hpp"
#include "mots/types.hpp"

namespace mots {

struct SequenceInput {
  std::string name;
  std::optional<ImageSize> image_size;
  double frame_rate = 30.0;
  // frames[k] holds the detections of frame k + 1. Frames without
  // detections are present and empty.
  std::vector<std::vector<Detection>> frames;
  std::size_t rejected_rows = 0;     // w <= 0 or h <= 0
  std::size_t clamped_confidence = 0;

  std::size_t num_detections() const;
};

// MOT Challenge detection CSV: `frame,id,x,y,w,h,conf,...`. source_index is
// the row's position among all rows of its frame, so rejected rows do not
// shift the indices of later ones. Confidences outside [0,1] are clamped.
SequenceInput load_mot_detections(const std::filesystem::path& path);

// MOT gt or result CSV: `frame,id,x,y,w,h[,flag,...]`. With
// `ground_truth`, rows whose flag column is 0 (not evaluated) are skipped.
std::vector<TrajectoryRow> load_mot_trajectories(const std::filesystem::path& path,
                                                 bool ground_truth);

// Writes `frame,id,x,y,w,h,1,-1,-1,-1`, sorted by frame then id, fixed
// two-decimal coordinates.
void write_results(std::vector<TrajectoryRow> rows, const std::filesystem::path& path);

struct SequenceInfo {
  std::string name;
  std::optional<ImageSize> image_size;
  std::optional<double> frame_rate;
  std::optional<int> length;
};

// MOT `seqinfo.ini` (imWidth, imHeight, frameRate, seqLength, name).
SequenceInfo load_seqinfo(const std::filesystem::path& path);

// Binary embedding sidecar, all integers and floats little-endian:
//   magic   7 bytes  "TREID1\0"
//   dim     u32
//   records (frame u32, det_index u32, dim x f32) until end of file
// The record count is implied by the file length.
inline constexpr char kSidecarMagic[7] = {'T', 'R', 'E', 'I', 'D', '1', '\0'};
inline constexpr std::size_t kSidecarHeaderBytes = 7 + 4;

struct EmbeddingRecord {
  std::uint32_t frame = 0;
  std::uint32_t det_index = 0;
  std::vector<float> values;
};

struct EmbeddingSidecar {
  std::uint32_t dim = 0;
  std::vector<EmbeddingRecord> records;
};

// Throws Error on duplicate (frame, det_index) or a record of the wrong width.
void write_sidecar(const EmbeddingSidecar& sidecar, const std::filesystem::path& path);
// Throws FormatError on bad magic, truncated records or duplicate keys.
EmbeddingSidecar read_sidecar(const std::filesystem::path& path);

// Copies each record onto the detection with the same (frame, source_index)
// and L2-normalizes it. Returns how many records found no detection.
std::size_t attach_embeddings(SequenceInput& input, const EmbeddingSidecar& sidecar);

}  // namespace mots
