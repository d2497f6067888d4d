#include "mots/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>

#include "mots/errors.hpp"

namespace mots {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("config key " + key + ": expected a number, got '" + value + "'");
  return out;
}

int to_int(const std::string& key, const std::string& value) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("config key " + key + ": expected an integer, got '" + value + "'");
  return out;
}

std::size_t to_size(const std::string& key, const std::string& value) {
  const int v = to_int(key, value);
  if (v < 0) throw ConfigError("config key " + key + " must be non-negative");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ConfigError("config key " + key + ": expected on/off, got '" + value + "'");
}

}  // namespace

Stage1Mode parse_stage1_mode(std::string_view text) {
  if (text == "adaptive") return Stage1Mode::Adaptive;
  if (text == "hungarian") return Stage1Mode::Hungarian;
  if (text == "off" || text == "none") return Stage1Mode::Off;
  throw ConfigError("unknown stage1 mode '" + std::string(text) + "'");
}

Stage2Mode parse_stage2_mode(std::string_view text) {
  if (text == "cosine") return Stage2Mode::Cosine;
  if (text == "precomputed") return Stage2Mode::Precomputed;
  if (text == "off" || text == "none") return Stage2Mode::Off;
  throw ConfigError("unknown stage2 provider '" + std::string(text) + "'");
}

std::string_view to_string(Stage1Mode mode) {
  switch (mode) {
    case Stage1Mode::Adaptive: return "adaptive";
    case Stage1Mode::Hungarian: return "hungarian";
    case Stage1Mode::Off: return "off";
  }
  return "?";
}

std::string_view to_string(Stage2Mode mode) {
  switch (mode) {
    case Stage2Mode::Cosine: return "cosine";
    case Stage2Mode::Precomputed: return "precomputed";
    case Stage2Mode::Off: return "off";
  }
  return "?";
}

void TrackerConfig::validate() const {
  stage1.validate();
  stage2.validate();
  lifecycle.validate();
  if (!(baseline_gate >= 0.0 && baseline_gate <= 1.0))
    throw ConfigError("baseline.gate must be in [0,1]");
  if (!(min_confidence >= 0.0 && min_confidence <= 1.0))
    throw ConfigError("tracker.min_confidence must be in [0,1]");
  if (max_coast < 0) throw ConfigError("output.max_coast must be >= 0");
  if (lifecycle.iou_window != stage1.t_n1)
    throw ConfigError("lifecycle iou window must equal stage1.t_n1");
  if (stage2_mode == Stage2Mode::Precomputed && scores_path.empty())
    throw ConfigError("stage2.provider=precomputed requires stage2.scores_path");
  if (lifecycle.mv_aware && !lifecycle.image_size)
    throw ConfigError("mv-aware deletion needs the image size (--image-size or seqinfo.ini)");
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string text = trim(std::string_view(line).substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    out[trim(std::string_view(text).substr(0, eq))] = trim(std::string_view(text).substr(eq + 1));
  }
  return out;
}

void apply_config(TrackerConfig& cfg, const std::map<std::string, std::string>& values) {
  using Setter = std::function<void(const std::string&, const std::string&)>;
  std::optional<double> width, height;
  const std::map<std::string, Setter> setters = {
      {"stage1.mode", [&](auto&, auto& v) { cfg.stage1_mode = parse_stage1_mode(v); }},
      {"stage1.t_n1",
       [&](auto& k, auto& v) { cfg.stage1.t_n1 = cfg.lifecycle.iou_window = to_size(k, v); }},
      {"stage1.throd_min", [&](auto& k, auto& v) { cfg.stage1.throd_min = to_double(k, v); }},
      {"stage1.match_min", [&](auto& k, auto& v) { cfg.stage1.match_min = to_double(k, v); }},
      {"stage1.norm_cap", [&](auto& k, auto& v) { cfg.stage1.norm_cap = to_double(k, v); }},
      {"baseline.gate", [&](auto& k, auto& v) { cfg.baseline_gate = to_double(k, v); }},
      {"stage2.provider", [&](auto&, auto& v) { cfg.stage2_mode = parse_stage2_mode(v); }},
      {"stage2.sim_min", [&](auto& k, auto& v) { cfg.stage2.sim_min = to_double(k, v); }},
      {"stage2.scores_path", [&](auto&, auto& v) { cfg.scores_path = v; }},
      {"lifecycle.enabled_mv_aware",
       [&](auto& k, auto& v) { cfg.lifecycle.mv_aware = to_bool(k, v); }},
      {"lifecycle.throd_del1", [&](auto& k, auto& v) { cfg.lifecycle.throd_del1 = to_int(k, v); }},
      {"lifecycle.throd_del2", [&](auto& k, auto& v) { cfg.lifecycle.throd_del2 = to_int(k, v); }},
      {"lifecycle.t_n2", [&](auto& k, auto& v) { cfg.lifecycle.t_n2 = to_size(k, v); }},
      {"lifecycle.boundary_factor",
       [&](auto& k, auto& v) { cfg.lifecycle.boundary_factor = to_double(k, v); }},
      {"lifecycle.init_hits", [&](auto& k, auto& v) { cfg.lifecycle.init_hits = to_int(k, v); }},
      {"lifecycle.max_age", [&](auto& k, auto& v) { cfg.lifecycle.max_age = to_int(k, v); }},
      {"lifecycle.gallery_size",
       [&](auto& k, auto& v) { cfg.lifecycle.gallery_size = to_size(k, v); }},
      {"tracker.min_confidence", [&](auto& k, auto& v) { cfg.min_confidence = to_double(k, v); }},
      {"output.max_coast", [&](auto& k, auto& v) { cfg.max_coast = to_int(k, v); }},
      {"image.width", [&](auto& k, auto& v) { width = to_double(k, v); }},
      {"image.height", [&](auto& k, auto& v) { height = to_double(k, v); }},
  };
  for (const auto& [key, value] : values) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(key, value);
  }
  if (width.has_value() != height.has_value())
    throw ConfigError("image.width and image.height must be given together");
  if (width) cfg.lifecycle.image_size = ImageSize{*width, *height};
}

}  // namespace mots
