// mots: command-line front end for the two-stage tracker.
//
//   mots track  --dets det.txt --out result.txt [--embeddings det.treid] ...
//   mots eval   --gt gt.txt --hyp result.txt [--out report.kv]
//   mots bench  [--targets 20 --frames 300 --seed 1 ...] [--write-dir DIR]
//   mots ablate [--dets det.txt --gt gt.txt --embeddings det.treid | synthetic options]

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mots/config.hpp"
#include "mots/errors.hpp"
#include "mots/io.hpp"
#include "mots/log.hpp"
#include "mots/metrics.hpp"
#include "mots/synthetic.hpp"
#include "mots/tracker.hpp"

namespace fs = std::filesystem;

namespace {

struct PipelineFlags {
  std::string config;
  std::string image_size;
  std::string seqinfo;
  std::string stage1;
  std::string stage2;
  std::string mv_aware;
  std::string scores;
  std::optional<double> min_confidence;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
  cmd->add_option("--config", f.config, "Flat key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--image-size", f.image_size, "Image size as WxH, e.g. 1920x1080");
  cmd->add_option("--seqinfo", f.seqinfo, "MOT seqinfo.ini with imWidth/imHeight")
      ->check(CLI::ExistingFile);
  cmd->add_option("--stage1", f.stage1, "First stage")
      ->check(CLI::IsMember({"adaptive", "hungarian", "off"}));
  cmd->add_option("--stage2", f.stage2, "Second-stage similarity provider")
      ->check(CLI::IsMember({"cosine", "precomputed", "off"}));
  cmd->add_option("--mv-aware", f.mv_aware, "Velocity-aware deletion")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--scores", f.scores, "Score table for --stage2 precomputed");
  cmd->add_option("--min-confidence", f.min_confidence, "Drop detections below this confidence");
}

std::optional<mots::ImageSize> parse_image_size(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw mots::ConfigError("--image-size expects WxH");
  try {
    const mots::ImageSize size{std::stod(text.substr(0, x)), std::stod(text.substr(x + 1))};
    if (!(size.width > 0 && size.height > 0)) throw mots::ConfigError("image size must be positive");
    return size;
  } catch (const std::logic_error&) {
    throw mots::ConfigError("--image-size expects WxH, got '" + text + "'");
  }
}

// defaults < config file < sequence metadata (image size only) < flags
mots::TrackerConfig resolve_config(const PipelineFlags& f,
                                   const std::optional<mots::ImageSize>& sequence_size) {
  mots::TrackerConfig cfg;
  if (!f.config.empty()) mots::apply_config(cfg, mots::read_key_values(f.config));
  if (!cfg.lifecycle.image_size && sequence_size) cfg.lifecycle.image_size = sequence_size;
  if (const auto size = parse_image_size(f.image_size)) cfg.lifecycle.image_size = size;
  if (!f.stage1.empty()) cfg.stage1_mode = mots::parse_stage1_mode(f.stage1);
  if (!f.stage2.empty()) cfg.stage2_mode = mots::parse_stage2_mode(f.stage2);
  if (!f.mv_aware.empty()) cfg.lifecycle.mv_aware = f.mv_aware == "on";
  if (!f.scores.empty()) cfg.scores_path = f.scores;
  if (f.min_confidence) cfg.min_confidence = *f.min_confidence;
  cfg.lifecycle.iou_window = cfg.stage1.t_n1;
  cfg.validate();
  return cfg;
}

std::optional<mots::SequenceInfo> find_seqinfo(const PipelineFlags& f, const fs::path& dets) {
  if (!f.seqinfo.empty()) return mots::load_seqinfo(f.seqinfo);
  // MOT layout: <seq>/det/det.txt next to <seq>/seqinfo.ini
  for (const fs::path& candidate :
       {dets.parent_path() / "seqinfo.ini", dets.parent_path().parent_path() / "seqinfo.ini"}) {
    if (!candidate.empty() && fs::exists(candidate)) return mots::load_seqinfo(candidate);
  }
  return std::nullopt;
}

mots::SequenceInput load_input(const std::string& dets, const std::string& embeddings,
                               const std::optional<mots::SequenceInfo>& info) {
  mots::SequenceInput input = mots::load_mot_detections(dets);
  if (info) {
    input.image_size = info->image_size;
    if (info->frame_rate) input.frame_rate = *info->frame_rate;
    if (!info->name.empty()) input.name = info->name;
    if (info->length && static_cast<std::size_t>(*info->length) > input.frames.size())
      input.frames.resize(*info->length);
  }
  if (!embeddings.empty()) mots::attach_embeddings(input, mots::read_sidecar(embeddings));
  return input;
}

mots::MetricsReport score_run(const std::vector<mots::TrajectoryRow>& gt,
                              const mots::SequenceResult& run, mots::Stage1Mode mode) {
  mots::MetricsReport report = mots::evaluate(gt, run.trajectories);
  mots::attach_run_stats(report, run, mode);
  return report;
}

int cmd_track(const PipelineFlags& flags, const std::string& dets, const std::string& embeddings,
              const std::string& gt, const std::string& out) {
  const auto info = find_seqinfo(flags, dets);
  const mots::SequenceInput input = load_input(dets, embeddings, info);
  const mots::TrackerConfig cfg = resolve_config(flags, input.image_size);
  const auto provider = mots::make_provider(cfg);
  const mots::SequenceResult run = mots::run_sequence(input, cfg, provider.get());
  mots::write_results(run.trajectories, out);
  mots::log::info("{}: {} frames, {} rows, {} tracks", input.name, run.frames,
                  run.trajectories.size(), run.tracks_created);
  if (!gt.empty()) {
    mots::print_report(std::cout, score_run(mots::load_mot_trajectories(gt, true), run,
                                            cfg.stage1_mode));
  }
  return 0;
}

int cmd_eval(const std::string& gt, const std::string& hyp, const std::string& out) {
  const mots::MetricsReport report =
      mots::evaluate(mots::load_mot_trajectories(gt, true), mots::load_mot_trajectories(hyp, false));
  mots::print_report(std::cout, report);
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw mots::Error("cannot write " + out);
    mots::write_key_values(os, report);
  }
  return 0;
}

void add_synthetic_flags(CLI::App* cmd, mots::SyntheticParams& p) {
  cmd->add_option("--targets", p.num_targets, "Number of synthetic identities");
  cmd->add_option("--frames", p.num_frames, "Number of frames");
  cmd->add_option("--seed", p.seed, "Generator seed");
  cmd->add_option("--dropout", p.dropout, "Share of missing detections");
  cmd->add_option("--max-gap", p.max_gap, "Longest detection gap in frames");
  cmd->add_option("--jitter", p.jitter, "Detection box noise std in pixels");
  cmd->add_option("--embedding-dim", p.embedding_dim, "Synthetic embedding width (0 = none)");
  cmd->add_option("--false-positives", p.false_positives_per_frame, "Clutter boxes per frame");
  cmd->add_flag("--crossing", p.crossing, "Targets enter and leave through image edges");
}

int cmd_bench(const PipelineFlags& flags, const mots::SyntheticParams& params,
              const std::string& write_dir) {
  const mots::SyntheticSequence seq = mots::generate_sequence(params);
  if (!write_dir.empty()) {
    fs::create_directories(write_dir);
    const fs::path dir(write_dir);
    mots::write_sequence_files(seq, dir / "det.txt", dir / "gt.txt", dir / "det.treid");
    std::ofstream info(dir / "seqinfo.ini");
    info << "[Sequence]\nname=synthetic\nframeRate=30\nseqLength=" << params.num_frames
         << "\nimWidth=" << params.image.width << "\nimHeight=" << params.image.height << '\n';
  }
  const mots::TrackerConfig cfg = resolve_config(flags, seq.input.image_size);
  const auto provider = mots::make_provider(cfg);
  const mots::SequenceResult run = mots::run_sequence(seq.input, cfg, provider.get());
  std::cout << "frames=" << run.frames << " detections=" << seq.input.num_detections()
            << " association_seconds=" << std::setprecision(4) << run.association_seconds
            << '\n';
  mots::print_report(std::cout, score_run(seq.ground_truth, run, cfg.stage1_mode));
  return 0;
}

struct AblationRow {
  const char* name;
  mots::Stage1Mode stage1;
  bool mv_aware;
};

int cmd_ablate(const PipelineFlags& flags, const mots::SyntheticParams& params,
               const std::string& dets, const std::string& embeddings, const std::string& gt,
               bool with_hungarian) {
  mots::SequenceInput input;
  std::vector<mots::TrajectoryRow> truth;
  if (!dets.empty()) {
    if (gt.empty()) throw mots::ConfigError("ablate --dets also needs --gt");
    input = load_input(dets, embeddings, find_seqinfo(flags, dets));
    truth = mots::load_mot_trajectories(gt, true);
  } else {
    mots::SyntheticSequence seq = mots::generate_sequence(params);
    input = std::move(seq.input);
    truth = std::move(seq.ground_truth);
  }
  std::vector<AblationRow> rows = {
      {"B", mots::Stage1Mode::Off, false},
      {"B&MA", mots::Stage1Mode::Off, true},
      {"B&SA", mots::Stage1Mode::Adaptive, false},
      {"B&SA&MA", mots::Stage1Mode::Adaptive, true},
  };
  if (with_hungarian) rows.push_back({"B&H&MA", mots::Stage1Mode::Hungarian, true});

  mots::print_report_header(std::cout, "config");
  for (const AblationRow& row : rows) {
    mots::TrackerConfig cfg = resolve_config(flags, input.image_size);
    cfg.stage1_mode = row.stage1;
    cfg.lifecycle.mv_aware = row.mv_aware;
    cfg.validate();
    const auto provider = mots::make_provider(cfg);
    const mots::SequenceResult run = mots::run_sequence(input, cfg, provider.get());
    mots::print_report_row(std::cout, score_run(truth, run, cfg.stage1_mode), row.name);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  mots::log::init_from_env();
  CLI::App app{"Two-stage multi-object tracker"};
  app.require_subcommand(1);

  PipelineFlags track_flags, bench_flags, ablate_flags;
  std::string dets, embeddings, gt, hyp, out, write_dir;
  mots::SyntheticParams synth;
  bool with_hungarian = false;

  CLI::App* track = app.add_subcommand("track", "Run the tracker on a detection file");
  add_pipeline_flags(track, track_flags);
  track->add_option("--dets", dets, "MOT detection CSV")->required()->check(CLI::ExistingFile);
  track->add_option("--embeddings", embeddings, "Embedding sidecar (.treid)")
      ->check(CLI::ExistingFile);
  track->add_option("--gt", gt, "Ground truth; prints metrics when given")
      ->check(CLI::ExistingFile);
  track->add_option("--out", out, "Result CSV")->required();

  CLI::App* eval = app.add_subcommand("eval", "Score a result file against ground truth");
  eval->add_option("--gt", gt, "Ground truth CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--hyp", hyp, "Result CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", out, "Write name=value metrics here");

  CLI::App* bench = app.add_subcommand("bench", "Generate a synthetic sequence and time the tracker");
  add_pipeline_flags(bench, bench_flags);
  add_synthetic_flags(bench, synth);
  bench->add_option("--write-dir", write_dir, "Also write det.txt, gt.txt, det.treid, seqinfo.ini");

  CLI::App* ablate = app.add_subcommand("ablate", "Compare B, B&MA, B&SA and B&SA&MA");
  add_pipeline_flags(ablate, ablate_flags);
  add_synthetic_flags(ablate, synth);
  ablate->add_option("--dets", dets, "MOT detection CSV (default: synthetic)")
      ->check(CLI::ExistingFile);
  ablate->add_option("--embeddings", embeddings, "Embedding sidecar")->check(CLI::ExistingFile);
  ablate->add_option("--gt", gt, "Ground truth CSV")->check(CLI::ExistingFile);
  ablate->add_flag("--hungarian", with_hungarian, "Also run Hungarian stage 1 with MA");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*track) return cmd_track(track_flags, dets, embeddings, gt, out);
    if (*eval) return cmd_eval(gt, hyp, out);
    if (*bench) return cmd_bench(bench_flags, synth, write_dir);
    if (*ablate) return cmd_ablate(ablate_flags, synth, dets, embeddings, gt, with_hungarian);
  } catch (const mots::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
