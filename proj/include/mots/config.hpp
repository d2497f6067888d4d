#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "mots/lifecycle.hpp"
#include "mots/stage1.hpp"
#include "mots/stage2.hpp"

namespace mots {

enum class Stage1Mode { Adaptive, Hungarian, Off };
enum class Stage2Mode { Cosine, Precomputed, Off };

Stage1Mode parse_stage1_mode(std::string_view text);
Stage2Mode parse_stage2_mode(std::string_view text);
std::string_view to_string(Stage1Mode mode);
std::string_view to_string(Stage2Mode mode);

struct TrackerConfig {
  Stage1Mode stage1_mode = Stage1Mode::Adaptive;
  Stage1Config stage1;
  double baseline_gate = 0.7;  // Hungarian stage 1: max admissible 1 - IOU
  Stage2Mode stage2_mode = Stage2Mode::Cosine;
  Stage2Config stage2;
  std::filesystem::path scores_path;
  LifecycleConfig lifecycle;
  double min_confidence = 0.0;
  // Lost tracks that are not leaving the image keep being reported at
  // their predicted position for up to this many frames.
  int max_coast = 5;

  void validate() const;
};

// Flat `key = value` text; '#' starts a comment. Throws ConfigError on
// malformed lines.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

// Applies known keys; throws ConfigError on an unknown key or bad value.
// Keys: stage1.mode, stage1.t_n1, stage1.throd_min, stage1.match_min,
// stage1.norm_cap, baseline.gate, stage2.provider, stage2.sim_min,
// stage2.scores_path, lifecycle.enabled_mv_aware, lifecycle.throd_del1,
// lifecycle.throd_del2, lifecycle.t_n2, lifecycle.boundary_factor,
// lifecycle.init_hits, lifecycle.max_age, lifecycle.gallery_size,
// tracker.min_confidence, output.max_coast, image.width, image.height.
void apply_config(TrackerConfig& cfg, const std::map<std::string, std::string>& values);

}  // namespace mots
