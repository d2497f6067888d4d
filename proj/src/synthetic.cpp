#include "mots/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "mots/errors.hpp"

namespace mots {
namespace {

using Rng = std::mt19937_64;

std::vector<std::vector<double>> simplex_embeddings(int n, std::size_t dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> out(n, std::vector<double>(dim));
  if (dim < static_cast<std::size_t>(n)) {
    // Not enough room for a simplex; random directions instead.
    for (auto& v : out) {
      double norm = 0.0;
      for (auto& x : v) {
        x = gauss(rng);
        norm += x * x;
      }
      for (auto& x : v) x /= std::sqrt(norm);
    }
    return out;
  }
  // Random orthonormal frame by Gram-Schmidt, then center it.
  std::vector<std::vector<double>> basis;
  while (basis.size() < static_cast<std::size_t>(n)) {
    std::vector<double> v(dim);
    for (auto& x : v) x = gauss(rng);
    for (const auto& b : basis) {
      double dot = 0.0;
      for (std::size_t d = 0; d < dim; ++d) dot += v[d] * b[d];
      for (std::size_t d = 0; d < dim; ++d) v[d] -= dot * b[d];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-6) continue;
    for (auto& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  std::vector<double> mean(dim, 0.0);
  for (const auto& b : basis)
    for (std::size_t d = 0; d < dim; ++d) mean[d] += b[d] / n;
  for (int k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      out[k][d] = basis[k][d] - (n > 1 ? mean[d] : 0.0);
      norm += out[k][d] * out[k][d];
    }
    for (auto& x : out[k]) x /= std::sqrt(norm);
  }
  return out;
}

struct Target {
  double cx = 0, cy = 0, w = 0, h = 0;
  double speed = 0, heading = 0, turn = 0;
  int birth = 1;
  bool alive = false;
  bool done = false;
  int frames_seen = 0;
  int gap_left = 0;
  bool prev_visible = true;
};

bool center_inside(const Target& t, const ImageSize& img) {
  return t.cx >= 0.0 && t.cx <= img.width && t.cy >= 0.0 && t.cy <= img.height;
}

void spawn_crossing(Target& t, const ImageSize& img, Rng& rng) {
  std::uniform_int_distribution<int> edge_dist(0, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> spread(-std::numbers::pi / 6, std::numbers::pi / 6);
  const int edge = edge_dist(rng);
  double inward = 0.0;
  switch (edge) {
    case 0:  // left
      t.cx = 1.0;
      t.cy = img.height * (0.2 + 0.6 * unit(rng));
      inward = 0.0;
      break;
    case 1:  // right
      t.cx = img.width - 1.0;
      t.cy = img.height * (0.2 + 0.6 * unit(rng));
      inward = std::numbers::pi;
      break;
    case 2:  // top
      t.cx = img.width * (0.2 + 0.6 * unit(rng));
      t.cy = 1.0;
      inward = std::numbers::pi / 2;
      break;
    default:  // bottom
      t.cx = img.width * (0.2 + 0.6 * unit(rng));
      t.cy = img.height - 1.0;
      inward = -std::numbers::pi / 2;
      break;
  }
  t.heading = inward + spread(rng);
}

void advance_bouncing(Target& t, const ImageSize& img) {
  t.heading += t.turn;
  double vx = t.speed * std::cos(t.heading);
  double vy = t.speed * std::sin(t.heading);
  t.cx += vx;
  t.cy += vy;
  if (t.cx - t.w / 2 < 0.0 || t.cx + t.w / 2 > img.width) {
    vx = -vx;
    t.cx = std::clamp(t.cx, t.w / 2, img.width - t.w / 2);
  }
  if (t.cy - t.h / 2 < 0.0 || t.cy + t.h / 2 > img.height) {
    vy = -vy;
    t.cy = std::clamp(t.cy, t.h / 2, img.height - t.h / 2);
  }
  t.heading = std::atan2(vy, vx);
}

}  // namespace

SyntheticSequence generate_sequence(const SyntheticParams& p) {
  if (p.num_targets < 0 || p.num_frames < 0) throw ConfigError("synthetic sizes must be >= 0");
  if (p.max_gap < 1 || !(p.dropout >= 0.0 && p.dropout < 1.0))
    throw ConfigError("synthetic dropout must be in [0,1) with max_gap >= 1");

  Rng rng(p.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const auto identity = simplex_embeddings(p.num_targets, p.embedding_dim, rng);

  std::vector<Target> targets(p.num_targets);
  for (Target& t : targets) {
    t.h = 60.0 + 80.0 * unit(rng);
    t.w = t.h * (0.35 + 0.15 * unit(rng));
    t.speed = p.min_speed + (p.max_speed - p.min_speed) * unit(rng);
    t.turn = unit(rng) < p.curved_fraction ? p.max_turn_rate * (2.0 * unit(rng) - 1.0) : 0.0;
    if (p.crossing) {
      t.birth = 1 + static_cast<int>(unit(rng) * 0.6 * p.num_frames);
      spawn_crossing(t, p.image, rng);
    } else {
      t.birth = 1;
      t.cx = t.w / 2 + unit(rng) * (p.image.width - t.w);
      t.cy = t.h / 2 + unit(rng) * (p.image.height - t.h);
      t.heading = 2.0 * std::numbers::pi * unit(rng);
    }
  }

  // Gap starts are Bernoulli per visible frame; the start probability
  // gives the requested long-run missing share for uniform gap lengths.
  const double mean_gap = (1.0 + p.max_gap) / 2.0;
  const double gap_start = p.dropout > 0.0 ? p.dropout / (mean_gap * (1.0 - p.dropout)) : 0.0;
  std::uniform_int_distribution<int> gap_len(1, p.max_gap);

  SyntheticSequence out;
  out.input.name = "synthetic";
  out.input.image_size = p.image;
  out.input.frames.resize(p.num_frames);

  for (int frame = 1; frame <= p.num_frames; ++frame) {
    std::vector<Detection> dets;
    for (int k = 0; k < p.num_targets; ++k) {
      Target& t = targets[k];
      if (t.done || frame < t.birth) continue;
      if (!t.alive) {
        t.alive = true;
      } else if (p.crossing) {
        t.heading += t.turn;
        t.cx += t.speed * std::cos(t.heading);
        t.cy += t.speed * std::sin(t.heading);
        if (!center_inside(t, p.image)) {
          t.done = true;
          continue;
        }
      } else {
        advance_bouncing(t, p.image);
      }

      const BoundingBox truth = BoundingBox::from_center(t.cx, t.cy, t.w, t.h);
      out.ground_truth.push_back({frame, k + 1, truth});

      // The first two frames are always observed so every target can be confirmed.
      bool visible = true;
      if (t.gap_left > 0) {
        --t.gap_left;
        visible = false;
      } else if (t.frames_seen >= 2 && t.prev_visible && unit(rng) < gap_start) {
        t.gap_left = gap_len(rng) - 1;
        visible = false;
      }
      t.prev_visible = visible;
      if (!visible) continue;
      ++t.frames_seen;

      Detection d;
      d.frame = frame;
      const double w = std::max(4.0, t.w + 0.5 * p.jitter * gauss(rng));
      const double h = std::max(4.0, t.h + 0.5 * p.jitter * gauss(rng));
      d.bbox = BoundingBox::from_center(t.cx + p.jitter * gauss(rng),
                                        t.cy + p.jitter * gauss(rng), w, h);
      d.confidence = 0.6 + 0.4 * unit(rng);
      if (p.embedding_dim > 0) {
        d.embedding.resize(p.embedding_dim);
        for (std::size_t c = 0; c < p.embedding_dim; ++c)
          d.embedding[c] = static_cast<float>(identity[k][c] + p.embedding_noise * gauss(rng));
        normalize_embedding(d.embedding);
      }
      dets.push_back(std::move(d));
    }
    for (int f = 0; f < p.false_positives_per_frame; ++f) {
      Detection d;
      d.frame = frame;
      const double h = 60.0 + 80.0 * unit(rng);
      d.bbox = BoundingBox(unit(rng) * (p.image.width - h / 2), unit(rng) * (p.image.height - h),
                           h / 2, h);
      d.confidence = 0.3 + 0.4 * unit(rng);
      if (p.embedding_dim > 0) {
        d.embedding.resize(p.embedding_dim);
        for (auto& x : d.embedding) x = static_cast<float>(gauss(rng));
        normalize_embedding(d.embedding);
      }
      dets.push_back(std::move(d));
    }
    std::shuffle(dets.begin(), dets.end(), rng);
    for (std::size_t i = 0; i < dets.size(); ++i) dets[i].source_index = static_cast<int>(i);
    out.input.frames[frame - 1] = std::move(dets);
  }
  return out;
}

void write_sequence_files(const SyntheticSequence& seq, const std::filesystem::path& dets,
                          const std::filesystem::path& gt,
                          const std::filesystem::path& embeddings) {
  std::ofstream det_out(dets, std::ios::binary | std::ios::trunc);
  std::ofstream gt_out(gt, std::ios::binary | std::ios::trunc);
  if (!det_out || !gt_out) throw Error("cannot write synthetic sequence files");
  char buf[200];
  EmbeddingSidecar sidecar;
  for (const auto& frame : seq.input.frames) {
    for (const Detection& d : frame) {
      const int n = std::snprintf(buf, sizeof(buf), "%d,-1,%.3f,%.3f,%.3f,%.3f,%.4f,-1,-1,-1\n",
                                  d.frame, d.bbox.x(), d.bbox.y(), d.bbox.w(), d.bbox.h(),
                                  d.confidence);
      det_out.write(buf, n);
      if (d.has_embedding()) {
        sidecar.dim = static_cast<std::uint32_t>(d.embedding.size());
        sidecar.records.push_back({static_cast<std::uint32_t>(d.frame),
                                   static_cast<std::uint32_t>(d.source_index), d.embedding});
      }
    }
  }
  for (const TrajectoryRow& r : seq.ground_truth) {
    const int n = std::snprintf(buf, sizeof(buf), "%d,%lld,%.3f,%.3f,%.3f,%.3f,1,1,1\n", r.frame,
                                static_cast<long long>(r.id), r.bbox.x(), r.bbox.y(), r.bbox.w(),
                                r.bbox.h());
    gt_out.write(buf, n);
  }
  if (!embeddings.empty()) write_sidecar(sidecar, embeddings);
}

}  // namespace mots
