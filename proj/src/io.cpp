#include "mots/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <string_view>

#include "mots/errors.hpp"
#include "mots/log.hpp"

namespace mots {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, const std::filesystem::path& path, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw FormatError("cannot parse '" + std::string(field) + "' in " + path.string(), line);
  }
  return value;
}

int parse_frame(std::string_view field, const std::filesystem::path& path, std::size_t line) {
  // Some writers emit integral columns as floats ("1.0").
  const double f = parse_number<double>(field, path, line);
  if (f < 1.0 || f != static_cast<double>(static_cast<int>(f)))
    throw FormatError("frame index must be a positive integer in " + path.string(), line);
  return static_cast<int>(f);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

void put_u32(std::ostream& os, std::uint32_t v) {
  const std::array<char, 4> bytes{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                  static_cast<char>((v >> 16) & 0xff),
                                  static_cast<char>((v >> 24) & 0xff)};
  os.write(bytes.data(), 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::size_t SequenceInput::num_detections() const {
  std::size_t n = 0;
  for (const auto& f : frames) n += f.size();
  return n;
}

SequenceInput load_mot_detections(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  SequenceInput seq;
  seq.name = path.stem().string();
  std::map<int, int> rows_in_frame;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    const auto fields = split_csv(text);
    if (fields.size() < 7)
      throw FormatError("expected at least 7 columns in " + path.string(), line_no);
    const int frame = parse_frame(fields[0], path, line_no);
    const int source_index = rows_in_frame[frame]++;
    const double x = parse_number<double>(fields[2], path, line_no);
    const double y = parse_number<double>(fields[3], path, line_no);
    const double w = parse_number<double>(fields[4], path, line_no);
    const double h = parse_number<double>(fields[5], path, line_no);
    double conf = parse_number<double>(fields[6], path, line_no);
    if (!(w > 0.0) || !(h > 0.0)) {
      ++seq.rejected_rows;
      continue;
    }
    if (conf < 0.0 || conf > 1.0) {
      ++seq.clamped_confidence;
      conf = std::clamp(conf, 0.0, 1.0);
    }
    if (seq.frames.size() < static_cast<std::size_t>(frame)) seq.frames.resize(frame);
    Detection det;
    det.frame = frame;
    try {
      det.bbox = BoundingBox(x, y, w, h);
    } catch (const InvalidBox& e) {
      throw FormatError(e.what(), line_no);
    }
    det.confidence = conf;
    det.source_index = source_index;
    seq.frames[frame - 1].push_back(std::move(det));
  }
  if (seq.rejected_rows)
    log::warn("{}: rejected {} rows with non-positive extent", path.string(), seq.rejected_rows);
  if (seq.clamped_confidence)
    log::warn("{}: clamped {} confidences into [0,1]", path.string(), seq.clamped_confidence);
  return seq;
}

std::vector<TrajectoryRow> load_mot_trajectories(const std::filesystem::path& path,
                                                 bool ground_truth) {
  std::ifstream in = open_input(path);
  std::vector<TrajectoryRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    const auto fields = split_csv(text);
    if (fields.size() < 6)
      throw FormatError("expected at least 6 columns in " + path.string(), line_no);
    if (ground_truth && fields.size() >= 7 && parse_number<double>(fields[6], path, line_no) == 0.0)
      continue;
    TrajectoryRow row;
    row.frame = parse_frame(fields[0], path, line_no);
    row.id = static_cast<std::int64_t>(parse_number<double>(fields[1], path, line_no));
    try {
      row.bbox = BoundingBox(parse_number<double>(fields[2], path, line_no),
                             parse_number<double>(fields[3], path, line_no),
                             parse_number<double>(fields[4], path, line_no),
                             parse_number<double>(fields[5], path, line_no));
    } catch (const InvalidBox& e) {
      throw FormatError(e.what(), line_no);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_results(std::vector<TrajectoryRow> rows, const std::filesystem::path& path) {
  std::sort(rows.begin(), rows.end(), [](const TrajectoryRow& a, const TrajectoryRow& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
  });
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  char buf[160];
  for (const TrajectoryRow& r : rows) {
    const int n = std::snprintf(buf, sizeof(buf), "%d,%lld,%.2f,%.2f,%.2f,%.2f,1,-1,-1,-1\n",
                                r.frame, static_cast<long long>(r.id), r.bbox.x(), r.bbox.y(),
                                r.bbox.w(), r.bbox.h());
    out.write(buf, n);
  }
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

SequenceInfo load_seqinfo(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  SequenceInfo info;
  std::optional<double> width, height;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    const auto eq = text.find('=');
    if (text.empty() || text[0] == '[' || text[0] == ';' || eq == std::string_view::npos) continue;
    const std::string_view key = trim(text.substr(0, eq));
    const std::string_view value = trim(text.substr(eq + 1));
    if (key == "name") {
      info.name = std::string(value);
    } else if (key == "imWidth") {
      width = parse_number<double>(value, path, line_no);
    } else if (key == "imHeight") {
      height = parse_number<double>(value, path, line_no);
    } else if (key == "frameRate") {
      info.frame_rate = parse_number<double>(value, path, line_no);
    } else if (key == "seqLength") {
      info.length = parse_number<int>(value, path, line_no);
    }
  }
  if (width && height) info.image_size = ImageSize{*width, *height};
  return info;
}

void write_sidecar(const EmbeddingSidecar& sidecar, const std::filesystem::path& path) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> keys;
  for (const auto& r : sidecar.records) {
    if (r.values.size() != sidecar.dim)
      throw Error("sidecar record width " + std::to_string(r.values.size()) +
                  " does not match dim " + std::to_string(sidecar.dim));
    if (!keys.insert({r.frame, r.det_index}).second)
      throw Error("duplicate sidecar record for frame " + std::to_string(r.frame) +
                  " detection " + std::to_string(r.det_index));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(kSidecarMagic, sizeof(kSidecarMagic));
  put_u32(out, sidecar.dim);
  for (const auto& r : sidecar.records) {
    put_u32(out, r.frame);
    put_u32(out, r.det_index);
    for (float v : r.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

EmbeddingSidecar read_sidecar(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < kSidecarHeaderBytes ||
      std::memcmp(bytes.data(), kSidecarMagic, sizeof(kSidecarMagic)) != 0) {
    throw FormatError("not an embedding sidecar: " + path.string());
  }
  EmbeddingSidecar sidecar;
  sidecar.dim = get_u32(bytes.data() + sizeof(kSidecarMagic));
  const std::size_t record_bytes = 8 + 4 * static_cast<std::size_t>(sidecar.dim);
  const std::size_t body = bytes.size() - kSidecarHeaderBytes;
  if (body % record_bytes != 0)
    throw FormatError("sidecar length is not a whole number of records: " + path.string());

  std::set<std::pair<std::uint32_t, std::uint32_t>> keys;
  const unsigned char* p = bytes.data() + kSidecarHeaderBytes;
  for (std::size_t r = 0; r < body / record_bytes; ++r) {
    EmbeddingRecord rec;
    rec.frame = get_u32(p);
    rec.det_index = get_u32(p + 4);
    p += 8;
    rec.values.resize(sidecar.dim);
    for (auto& v : rec.values) {
      v = std::bit_cast<float>(get_u32(p));
      p += 4;
    }
    if (!keys.insert({rec.frame, rec.det_index}).second)
      throw FormatError("duplicate sidecar record for frame " + std::to_string(rec.frame) +
                        " detection " + std::to_string(rec.det_index));
    sidecar.records.push_back(std::move(rec));
  }
  return sidecar;
}

std::size_t attach_embeddings(SequenceInput& input, const EmbeddingSidecar& sidecar) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, Detection*> lookup;
  for (auto& frame : input.frames)
    for (auto& det : frame)
      lookup[{static_cast<std::uint32_t>(det.frame), static_cast<std::uint32_t>(det.source_index)}] =
          &det;
  std::size_t orphans = 0;
  for (const auto& rec : sidecar.records) {
    const auto it = lookup.find({rec.frame, rec.det_index});
    if (it == lookup.end()) {
      ++orphans;
      continue;
    }
    it->second->embedding = rec.values;
    if (!normalize_embedding(it->second->embedding)) it->second->embedding.clear();
  }
  if (orphans) log::warn("{} embedding records match no detection", orphans);
  return orphans;
}

}  // namespace mots
