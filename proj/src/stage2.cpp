#include "mots/stage2.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "mots/errors.hpp"
#include "mots/kernels.hpp"

namespace mots {
namespace {

void require_embeddings(const std::vector<const Detection*>& detections,
                        const SimilarityProvider& provider) {
  if (!provider.requires_embeddings()) return;
  for (const Detection* d : detections) {
    if (!d->has_embedding()) {
      throw MissingEmbedding("detection " + std::to_string(d->source_index) + " in frame " +
                             std::to_string(d->frame) + " has no embedding");
    }
  }
}

}  // namespace

double CosineProvider::score(const Track& track, const Detection& detection) const {
  double best = 0.0;
  for (const GalleryEntry& g : track.gallery) {
    if (g.embedding.size() != detection.embedding.size()) continue;
    double dot = 0.0;
    for (std::size_t k = 0; k < g.embedding.size(); ++k)
      dot += static_cast<double>(g.embedding[k]) * detection.embedding[k];
    best = std::max(best, std::clamp((1.0 + dot) / 2.0, 0.0, 1.0));
  }
  return best;
}

PrecomputedProvider PrecomputedProvider::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open score table " + path.string());
  PrecomputedProvider provider;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    int fa = 0, da = 0, fb = 0, db = 0;
    double s = 0.0;
    if (!(fields >> fa >> da >> fb >> db >> s))
      throw FormatError("malformed score row in " + path.string(), line_no);
    if (!(s >= 0.0 && s <= 1.0))
      throw FormatError("score outside [0,1] in " + path.string(), line_no);
    provider.set(fa, da, fb, db, s);
  }
  return provider;
}

void PrecomputedProvider::set(int frame_a, int det_a, int frame_b, int det_b, double score) {
  table_[{frame_a, det_a, frame_b, det_b}] = score;
  table_[{frame_b, det_b, frame_a, det_a}] = score;
}

double PrecomputedProvider::lookup(int frame_a, int det_a, int frame_b, int det_b) const {
  const auto it = table_.find({frame_a, det_a, frame_b, det_b});
  return it == table_.end() ? 0.0 : it->second;
}

double PrecomputedProvider::score(const Track& track, const Detection& detection) const {
  double best = 0.0;
  for (const GalleryEntry& g : track.gallery)
    best = std::max(best, lookup(g.frame, g.det_index, detection.frame, detection.source_index));
  return best;
}

void Stage2Config::validate() const {
  if (!(sim_min >= 0.0 && sim_min <= 1.0)) throw ConfigError("stage2.sim_min must be in [0,1]");
}

SimilarityMatrix build_similarity_matrix(const std::vector<const Track*>& tracks,
                                         const std::vector<const Detection*>& detections,
                                         const SimilarityProvider& provider) {
  std::size_t work = tracks.size() * detections.size();
  if (provider.requires_embeddings() && !detections.empty())
    work *= detections.front()->embedding.size();
  // Even a one-thread team costs a fork/join, so small frames skip OpenMP.
  if (work < kParallelMinCells * 16)
    return reference::build_similarity_matrix(tracks, detections, provider);
  require_embeddings(detections, provider);
  SimilarityMatrix out(tracks.size(), detections.size());
  const auto rows = static_cast<std::ptrdiff_t>(tracks.size());
  const std::size_t cols = detections.size();
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < rows; ++j) {
    for (std::size_t i = 0; i < cols; ++i)
      out(j, i) = provider.score(*tracks[j], *detections[i]);
  }
  return out;
}

AssociationResult fine_match(const SimilarityMatrix& sim, const Stage2Config& cfg) {
  struct Cell {
    double value;
    std::size_t row, col;
  };
  std::vector<Cell> cells;
  for (std::size_t j = 0; j < sim.rows(); ++j)
    for (std::size_t i = 0; i < sim.cols(); ++i)
      if (sim(j, i) >= cfg.sim_min) cells.push_back({sim(j, i), j, i});
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
  });

  AssociationResult result;
  std::vector<char> row_used(sim.rows(), 0), col_used(sim.cols(), 0);
  for (const Cell& c : cells) {
    if (row_used[c.row] || col_used[c.col]) continue;
    row_used[c.row] = col_used[c.col] = 1;
    result.matches.emplace_back(c.row, c.col);
  }
  std::sort(result.matches.begin(), result.matches.end());
  fill_unmatched(result, sim.rows(), sim.cols());
  return result;
}

namespace reference {

SimilarityMatrix build_similarity_matrix(const std::vector<const Track*>& tracks,
                                         const std::vector<const Detection*>& detections,
                                         const SimilarityProvider& provider) {
  require_embeddings(detections, provider);
  SimilarityMatrix out(tracks.size(), detections.size());
  for (std::size_t j = 0; j < tracks.size(); ++j)
    for (std::size_t i = 0; i < detections.size(); ++i)
      out(j, i) = provider.score(*tracks[j], *detections[i]);
  return out;
}

}  // namespace reference
}  // namespace mots
