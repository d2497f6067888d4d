#include "mots/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "mots/errors.hpp"
#include "mots/hungarian.hpp"

namespace mots {
namespace {

using FrameIndex = std::map<int, std::vector<const TrajectoryRow*>>;

FrameIndex index_by_frame(const std::vector<TrajectoryRow>& rows, const char* what) {
  FrameIndex out;
  for (const TrajectoryRow& r : rows) out[r.frame].push_back(&r);
  for (auto& [frame, list] : out) {
    std::set<std::int64_t> ids;
    for (const TrajectoryRow* r : list) {
      if (!ids.insert(r->id).second) {
        throw FormatError(std::string(what) + " has duplicate id " + std::to_string(r->id) +
                          " in frame " + std::to_string(frame));
      }
    }
  }
  return out;
}

void print_optional(std::ostream& os, const std::optional<double>& v, bool percent) {
  if (!v) {
    os << "\\";
  } else if (percent) {
    os << std::fixed << std::setprecision(2) << *v * 100.0;
  } else {
    os << std::fixed << std::setprecision(2) << *v;
  }
}

}  // namespace

CoverageRatios coverage_ratios(const Stage1Counters& counters) {
  if (counters.total_detects_num == 0) throw EmptySequence("no detections were processed");
  CoverageRatios out;
  out.m_det = static_cast<double>(counters.total_matchs_num) /
              static_cast<double>(counters.total_detects_num);
  out.m_track = counters.total_tracks_num == 0
                    ? 0.0
                    : static_cast<double>(counters.total_matchs_num) /
                          static_cast<double>(counters.total_tracks_num);
  return out;
}

MetricsReport evaluate(const std::vector<TrajectoryRow>& gt,
                       const std::vector<TrajectoryRow>& hyp, const EvalConfig& cfg) {
  const FrameIndex gt_frames = index_by_frame(gt, "ground truth");
  const FrameIndex hyp_frames = index_by_frame(hyp, "hypothesis");
  std::set<int> frames;
  for (const auto& [f, _] : gt_frames) frames.insert(f);
  for (const auto& [f, _] : hyp_frames) frames.insert(f);

  MetricsReport report;
  report.num_gt = gt.size();
  report.num_hyp = hyp.size();

  std::unordered_map<std::int64_t, std::int64_t> last_match;  // gt id -> hyp id
  std::unordered_map<std::int64_t, std::uint64_t> gt_len, gt_covered;
  std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> pair_hits;
  double iou_sum = 0.0;
  const std::vector<const TrajectoryRow*> none;

  for (int frame : frames) {
    const auto git = gt_frames.find(frame);
    const auto hit = hyp_frames.find(frame);
    const auto& g = git == gt_frames.end() ? none : git->second;
    const auto& h = hit == hyp_frames.end() ? none : hit->second;

    Matrix overlap(g.size(), h.size());
    for (std::size_t a = 0; a < g.size(); ++a) {
      ++gt_len[g[a]->id];
      for (std::size_t b = 0; b < h.size(); ++b) {
        overlap(a, b) = iou(g[a]->bbox, h[b]->bbox);
        if (overlap(a, b) >= cfg.iou_gate) ++pair_hits[{g[a]->id, h[b]->id}];
      }
    }

    std::vector<int> g_to_h(g.size(), -1);
    std::vector<char> h_used(h.size(), 0);
    // Keep correspondences that are still valid.
    for (std::size_t a = 0; a < g.size(); ++a) {
      const auto lm = last_match.find(g[a]->id);
      if (lm == last_match.end()) continue;
      for (std::size_t b = 0; b < h.size(); ++b) {
        if (!h_used[b] && h[b]->id == lm->second && overlap(a, b) >= cfg.iou_gate) {
          g_to_h[a] = static_cast<int>(b);
          h_used[b] = 1;
          break;
        }
      }
    }
    // Assign the rest optimally.
    std::vector<std::size_t> free_g, free_h;
    for (std::size_t a = 0; a < g.size(); ++a)
      if (g_to_h[a] < 0) free_g.push_back(a);
    for (std::size_t b = 0; b < h.size(); ++b)
      if (!h_used[b]) free_h.push_back(b);
    AssignmentProblem problem{Matrix(free_g.size(), free_h.size()), 1.0 - cfg.iou_gate};
    for (std::size_t r = 0; r < free_g.size(); ++r)
      for (std::size_t c = 0; c < free_h.size(); ++c)
        problem.cost(r, c) = 1.0 - overlap(free_g[r], free_h[c]);
    for (const auto& [r, c] : hungarian_solve(problem).matches) {
      if (overlap(free_g[r], free_h[c]) < cfg.iou_gate) continue;
      g_to_h[free_g[r]] = static_cast<int>(free_h[c]);
      h_used[free_h[c]] = 1;
    }

    std::size_t matched = 0;
    for (std::size_t a = 0; a < g.size(); ++a) {
      if (g_to_h[a] < 0) continue;
      const TrajectoryRow& hr = *h[g_to_h[a]];
      ++matched;
      ++gt_covered[g[a]->id];
      iou_sum += overlap(a, g_to_h[a]);
      const auto lm = last_match.find(g[a]->id);
      if (lm != last_match.end() && lm->second != hr.id) ++report.ids;
      last_match[g[a]->id] = hr.id;
    }
    report.num_matches += matched;
    report.fn += g.size() - matched;
    report.fp += h.size() - matched;
  }

  report.num_gt_ids = gt_len.size();
  for (const auto& [id, len] : gt_len) {
    const double ratio = static_cast<double>(gt_covered[id]) / static_cast<double>(len);
    if (ratio >= cfg.mostly_tracked) {
      ++report.mt;
    } else if (ratio <= cfg.mostly_lost) {
      ++report.ml;
    } else {
      ++report.pt;
    }
  }

  const double denom = static_cast<double>(std::max<std::uint64_t>(report.num_gt, 1));
  report.mota = 1.0 - static_cast<double>(report.fn + report.fp + report.ids) / denom;
  report.motp = report.num_matches ? iou_sum / static_cast<double>(report.num_matches) : 0.0;

  // Global identity matching.
  std::map<std::int64_t, std::size_t> gt_ids, hyp_ids;
  for (const auto& r : gt) gt_ids.emplace(r.id, 0);
  for (const auto& r : hyp) hyp_ids.emplace(r.id, 0);
  std::size_t k = 0;
  for (auto& [id, idx] : gt_ids) idx = k++;
  k = 0;
  for (auto& [id, idx] : hyp_ids) idx = k++;
  if (!gt_ids.empty() && !hyp_ids.empty()) {
    Matrix tp(gt_ids.size(), hyp_ids.size());
    double max_tp = 0.0;
    for (const auto& [key, count] : pair_hits) {
      tp(gt_ids[key.first], hyp_ids[key.second]) = static_cast<double>(count);
      max_tp = std::max(max_tp, static_cast<double>(count));
    }
    Matrix cost(tp.rows(), tp.cols());
    for (std::size_t r = 0; r < tp.rows(); ++r)
      for (std::size_t c = 0; c < tp.cols(); ++c) cost(r, c) = max_tp - tp(r, c);
    const std::vector<int> assignment = solve_assignment(cost);
    for (std::size_t r = 0; r < assignment.size(); ++r)
      if (assignment[r] >= 0) report.idtp += static_cast<std::uint64_t>(tp(r, assignment[r]));
  }
  const std::uint64_t boxes = report.num_gt + report.num_hyp;
  report.idf1 = boxes ? 2.0 * static_cast<double>(report.idtp) / static_cast<double>(boxes) : 1.0;
  return report;
}

void print_report_header(std::ostream& os, std::string_view label) {
  const auto flags = os.flags();
  os << std::left;
  if (!label.empty()) os << std::setw(10) << label;
  os << std::setw(8) << "MOTA" << std::setw(8) << "IDF1" << std::setw(8) << "MOTP" << std::setw(6)
     << "MT" << std::setw(6) << "ML" << std::setw(6) << "IDS" << std::setw(8) << "FP"
     << std::setw(8) << "FN" << std::setw(9) << "M-det" << std::setw(9) << "M-track" << "FPS"
     << '\n';
  os.flags(flags);
}

void print_report_row(std::ostream& os, const MetricsReport& r, std::string_view label) {
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::left;
  if (!label.empty()) os << std::setw(10) << label;
  os << std::fixed << std::setprecision(1) << std::setw(8) << r.mota * 100.0 << std::setw(8)
     << r.idf1 * 100.0 << std::setw(8) << r.motp * 100.0 << std::setw(6) << r.mt << std::setw(6)
     << r.ml << std::setw(6) << r.ids << std::setw(8) << r.fp << std::setw(8) << r.fn;
  std::ostringstream m_det, m_track, fps;
  print_optional(m_det, r.m_det, true);
  print_optional(m_track, r.m_track, true);
  print_optional(fps, r.fps, false);
  os << std::setw(9) << m_det.str() << std::setw(9) << m_track.str() << fps.str() << '\n';
  os.precision(precision);
  os.flags(flags);
}

void print_report(std::ostream& os, const MetricsReport& report) {
  print_report_header(os);
  print_report_row(os, report);
}

void write_key_values(std::ostream& os, const MetricsReport& r) {
  const auto flags = os.flags();
  const auto precision = os.precision(10);
  const auto opt = [&os](const char* name, const std::optional<double>& v) {
    os << name << '=';
    if (v) {
      os << *v;
    } else {
      os << '\\';
    }
    os << '\n';
  };
  os << "mota=" << r.mota << '\n'
     << "motp=" << r.motp << '\n'
     << "idf1=" << r.idf1 << '\n'
     << "mt=" << r.mt << '\n'
     << "pt=" << r.pt << '\n'
     << "ml=" << r.ml << '\n'
     << "ids=" << r.ids << '\n'
     << "fp=" << r.fp << '\n'
     << "fn=" << r.fn << '\n'
     << "num_gt=" << r.num_gt << '\n'
     << "num_hyp=" << r.num_hyp << '\n';
  opt("m_det", r.m_det);
  opt("m_track", r.m_track);
  opt("fps", r.fps);
  os.precision(precision);
  os.flags(flags);
}

}  // namespace mots
