#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <tuple>
#include <vector>

#include "mots/geometry.hpp"
#include "mots/types.hpp"

namespace mots {

// Appearance similarity between a track and a detection, in [0,1].
// Implementations must be safe for concurrent const calls.
class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  virtual double score(const Track& track, const Detection& detection) const = 0;
  virtual bool requires_embeddings() const { return false; }
};

class ConstantProvider final : public SimilarityProvider {
 public:
  explicit ConstantProvider(double value) : value_(value) {}
  double score(const Track&, const Detection&) const override { return value_; }

 private:
  double value_;
};

// Max over the track gallery of (1 + cos) / 2. Embeddings are unit length,
// so the cosine is a dot product. An empty gallery scores 0.
class CosineProvider final : public SimilarityProvider {
 public:
  double score(const Track& track, const Detection& detection) const override;
  bool requires_embeddings() const override { return true; }
};

// Detection-to-detection scores computed offline (e.g. by the fine-match
// network). A track scores the max over the detections in its gallery;
// pairs absent from the table score 0. The table is symmetric.
//
// File format: one `frame_a,det_a,frame_b,det_b,score` row per line;
// blank lines and lines starting with '#' are skipped.
class PrecomputedProvider final : public SimilarityProvider {
 public:
  PrecomputedProvider() = default;
  static PrecomputedProvider load(const std::filesystem::path& path);

  void set(int frame_a, int det_a, int frame_b, int det_b, double score);
  double lookup(int frame_a, int det_a, int frame_b, int det_b) const;
  double score(const Track& track, const Detection& detection) const override;
  std::size_t size() const { return table_.size(); }

 private:
  using Key = std::tuple<int, int, int, int>;
  std::map<Key, double> table_;
};

struct Stage2Config {
  double sim_min = 0.5;

  void validate() const;
};

using SimilarityMatrix = Matrix;

// values(j, i) = provider.score(*tracks[j], *detections[i]); pairs are scored
// in parallel for large matrices. Throws MissingEmbedding when the provider
// needs embeddings and a detection has none.
SimilarityMatrix build_similarity_matrix(const std::vector<const Track*>& tracks,
                                         const std::vector<const Detection*>& detections,
                                         const SimilarityProvider& provider);

// Greedy global matching: repeatedly accept the largest remaining score
// >= sim_min and retire its row and column. Equal scores resolve by lowest
// (row, column).
AssociationResult fine_match(const SimilarityMatrix& sim, const Stage2Config& cfg);

namespace reference {

SimilarityMatrix build_similarity_matrix(const std::vector<const Track*>& tracks,
                                         const std::vector<const Detection*>& detections,
                                         const SimilarityProvider& provider);

}  // namespace reference
}  // namespace mots
