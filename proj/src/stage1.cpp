#include "mots/stage1.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "mots/errors.hpp"

namespace mots {
namespace {

struct TopTwo {
  double best = -std::numeric_limits<double>::infinity();
  double second = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;

  void offer(double v, std::size_t idx) {
    if (v > best) {
      second = best;
      best = v;
      arg = idx;
    } else if (v > second) {
      second = v;
    }
  }
};

}  // namespace

void Stage1Config::validate() const {
  if (!(throd_min > 0.0 && throd_min < 1.0))
    throw ConfigError("stage1.throd_min must be in (0,1)");
  if (!(match_min > 0.0)) throw ConfigError("stage1.match_min must be positive");
  if (t_n1 < 1) throw ConfigError("stage1.t_n1 must be >= 1");
  if (!(norm_cap > 0.0)) throw ConfigError("stage1.norm_cap must be positive");
}

double default_base_iou(const Stage1Config& cfg) {
  return cfg.throd_min + (1.0 - cfg.throd_min) / 2.0;
}

TrackMotionStats update_base_iou(TrackMotionStats stats, double new_iou,
                                 const Stage1Config& cfg) {
  stats.iou_history.push(new_iou);
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : stats.iou_history) {
    if (v > 0.0) {
      sum += v;
      ++n;
    }
  }
  stats.base_iou = n ? sum / static_cast<double>(n) : default_base_iou(cfg);
  return stats;
}

NormalizedIouMatrix clamp_and_normalize(const Matrix& raw, std::span<const double> bases,
                                        const Stage1Config& cfg) {
  if (bases.size() != raw.rows())
    throw Error("clamp_and_normalize: one base value per track row is required");
  NormalizedIouMatrix out{Matrix(raw.rows(), raw.cols()), raw};
  const double fallback = default_base_iou(cfg);
  for (std::size_t j = 0; j < raw.rows(); ++j) {
    const double base = bases[j] > 0.0 ? bases[j] : fallback;
    for (std::size_t i = 0; i < raw.cols(); ++i) {
      const double v = raw(j, i);
      out.values(j, i) = v < cfg.throd_min ? 0.0 : std::min(v / base, cfg.norm_cap);
    }
  }
  return out;
}

AssociationResult adaptive_match(const NormalizedIouMatrix& norm, const Stage1Config& cfg) {
  const Matrix& m = norm.values;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<TopTwo> row_top(rows), col_top(cols);
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t i = 0; i < cols; ++i) {
      row_top[j].offer(m(j, i), i);
      col_top[i].offer(m(j, i), j);
    }
  }

  AssociationResult result;
  for (std::size_t j = 0; j < rows; ++j) {
    if (cols == 0) break;
    const TopTwo& r = row_top[j];
    const std::size_t i = r.arg;
    const TopTwo& c = col_top[i];
    // A tie for the maximum shows up as second == best and fails the
    // runner-up test below, so ties always fall through to stage 2.
    if (c.arg != j || r.best < cfg.match_min) continue;
    if (r.second >= cfg.match_min || c.second >= cfg.match_min) continue;
    result.matches.emplace_back(j, i);
  }
  fill_unmatched(result, rows, cols);
  return result;
}

double record_matched_iou(double prev, double raw_iou_of_match, bool is_init_frame,
                          const Stage1Config& cfg) {
  if (is_init_frame) return 0.0;
  if (raw_iou_of_match >= cfg.throd_min) return raw_iou_of_match;
  return prev;
}

}  // namespace mots
