#include "vmtrack/io.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "text_util.hpp"
#include "vmtrack/error.hpp"

namespace vmtrack {

namespace {

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw ParseError(source, line, what);
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Pose CSV

PoseFrames parse_pose_csv(std::string_view text, const std::string& source) {
  const auto rows = text::lines(text);
  if (rows.empty()) fail(source, 1, "missing header");
  if (rows[0] != kPoseHeader) fail(source, 1, "header must be '" + std::string(kPoseHeader) + "'");

  PoseFrames frames;
  std::optional<bool> labeled_file;
  // Current pose being assembled.
  long long cur_frame = -1;
  long long cur_key = -1;
  std::size_t next_keypoint = kKeypointCount;
  std::size_t pose_line = 0;

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::size_t line = i + 1;
    const auto f = text::split(rows[i], ',');
    if (f.size() != 8) fail(source, line, "expected 8 fields, got " + std::to_string(f.size()));

    const auto frame = text::to_int(f[0]);
    if (!frame || *frame < 0) fail(source, line, "frame must be a non-negative integer");
    const bool labeled = f[1] != "-";
    if (labeled_file && *labeled_file != labeled) fail(source, line, "mixed anonymous and labeled rows");
    labeled_file = labeled;
    long long key = 0;
    if (labeled) {
      const auto id = text::to_int(f[1]);
      if (!id || *id < 1) fail(source, line, "player must be a positive integer id or '-'");
      if (f[2] != "-") fail(source, line, "det must be '-' on labeled rows");
      key = *id;
    } else {
      const auto det = text::to_int(f[2]);
      if (!det || *det < 0) fail(source, line, "det must be a non-negative integer on anonymous rows");
      key = *det;
    }
    const auto name = parse_keypoint_name(f[3]);
    if (!name) fail(source, line, "unknown keypoint '" + std::string(f[3]) + "'");
    const auto x = text::to_double(f[4]);
    const auto y = text::to_double(f[5]);
    if (!x || !y) fail(source, line, "x and y must be decimal numbers");
    const auto conf = text::to_double(f[6]);
    if (!conf || *conf < 0.0 || *conf > 1.0) fail(source, line, "confidence must be a decimal in [0, 1]");
    if (f[7] != "0" && f[7] != "1") fail(source, line, "visible must be 0 or 1");

    const bool starts_pose = next_keypoint == kKeypointCount;
    if (starts_pose) {
      if (*frame < cur_frame || (*frame == cur_frame && key <= cur_key)) fail(source, line, "rows out of order");
      if (!labeled) {
        const long long expected = *frame == cur_frame ? cur_key + 1 : 0;
        if (key != expected) fail(source, line, "det indices must count up from 0 within a frame");
      }
      if (static_cast<std::size_t>(*name) != 0) fail(source, line, "pose must start with keypoint 'head'");
      while (static_cast<long long>(frames.size()) <= *frame) {
        frames.push_back({static_cast<int>(frames.size()), {}});
      }
      Pose pose;
      if (labeled) pose.player_id = static_cast<PlayerId>(key);
      frames[static_cast<std::size_t>(*frame)].poses.push_back(pose);
      cur_frame = *frame;
      cur_key = key;
      next_keypoint = 0;
      pose_line = line;
    } else if (*frame != cur_frame || key != cur_key) {
      fail(source, line, "pose starting at line " + std::to_string(pose_line) + " is missing keypoints");
    }
    if (static_cast<std::size_t>(*name) != next_keypoint) {
      fail(source, line, "expected keypoint '" + std::string(to_string(kAllKeypoints[next_keypoint])) + "'");
    }
    Pose& pose = frames[static_cast<std::size_t>(cur_frame)].poses.back();
    pose[*name] = {*x, *y, *conf, f[7] == "1"};
    ++next_keypoint;
  }
  if (next_keypoint != kKeypointCount) {
    fail(source, rows.size() + 1, "pose starting at line " + std::to_string(pose_line) + " is missing keypoints");
  }
  return frames;
}

std::string format_pose_csv(const PoseFrames& frames) {
  std::string out(kPoseHeader);
  out += '\n';
  for (const PoseFrame& frame : frames) {
    std::vector<const Pose*> order;
    for (const Pose& p : frame.poses) order.push_back(&p);
    const bool labeled = !order.empty() && order.front()->player_id.has_value();
    if (labeled) {
      std::stable_sort(order.begin(), order.end(),
                       [](const Pose* a, const Pose* b) { return a->player_id.value_or(0) < b->player_id.value_or(0); });
    }
    for (std::size_t det = 0; det < order.size(); ++det) {
      const Pose& p = *order[det];
      if (p.player_id.has_value() != labeled) throw ValidationError("frame mixes anonymous and labeled poses");
      const std::string who = labeled ? fmt::format("{},-", *p.player_id) : fmt::format("-,{}", det);
      for (KeypointName name : kAllKeypoints) {
        const Keypoint& k = p[name];
        fmt::format_to(std::back_inserter(out), "{},{},{},{:.3f},{:.3f},{:.3f},{}\n", frame.frame_index, who,
                       to_string(name), k.x, k.y, k.confidence, k.visible ? 1 : 0);
      }
    }
  }
  return out;
}

PoseFrames read_pose_file(const std::filesystem::path& path) { return parse_pose_csv(read_text(path), path.string()); }

void write_pose_file(const std::filesystem::path& path, const PoseFrames& frames) {
  write_text_atomic(path, format_pose_csv(frames));
}

// ---------------------------------------------------------------------------------------------
// MOTChallenge

TrackSet parse_mot(std::string_view text, const std::string& source, std::optional<int> frame_count) {
  TrackSet out;
  out.sequence_name = std::filesystem::path(source).stem().string();
  const auto rows = text::lines(text);
  int max_frame = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t line = i + 1;
    const auto f = text::split(rows[i], ',');
    if (f.size() != 10) fail(source, line, "expected 10 fields, got " + std::to_string(f.size()));
    const auto frame = text::to_int(f[0]);
    if (!frame || *frame < 1) fail(source, line, "frame must be a positive integer");
    const auto id = text::to_int(f[1]);
    if (!id) fail(source, line, "id must be an integer");
    std::array<double, 5> v{};
    for (std::size_t k = 0; k < 5; ++k) {
      const auto d = text::to_double(f[2 + k]);
      if (!d) fail(source, line, "field " + std::to_string(3 + k) + " is not numeric");
      v[k] = *d;
    }
    for (std::size_t k = 7; k < 10; ++k) {
      if (!text::to_double(f[k])) fail(source, line, "field " + std::to_string(k + 1) + " is not numeric");
    }
    if (v[2] <= 0.0 || v[3] <= 0.0) fail(source, line, "width and height must be positive");
    max_frame = std::max(max_frame, static_cast<int>(*frame));
    out.detections.push_back({static_cast<int>(*frame) - 1, static_cast<int>(*id), {v[0], v[1], v[2], v[3]}, v[4]});
  }
  if (frame_count) {
    if (*frame_count < max_frame) {
      throw ValidationError(source + ": detections reach frame " + std::to_string(max_frame) +
                            " beyond the sequence length " + std::to_string(*frame_count));
    }
    out.frame_count = *frame_count;
  } else {
    out.frame_count = max_frame;
  }
  return out;
}

std::string format_mot(const TrackSet& tracks) {
  std::vector<const Detection*> order;
  for (const Detection& d : tracks.detections) order.push_back(&d);
  std::stable_sort(order.begin(), order.end(), [](const Detection* a, const Detection* b) {
    return std::tie(a->frame_index, a->track_id) < std::tie(b->frame_index, b->track_id);
  });
  std::string out;
  for (const Detection* d : order) {
    fmt::format_to(std::back_inserter(out), "{},{},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},-1,-1,-1\n", d->frame_index + 1,
                   d->track_id, d->bbox.x, d->bbox.y, d->bbox.w, d->bbox.h, d->confidence);
  }
  return out;
}

TrackSet read_mot(const std::filesystem::path& path, std::optional<int> frame_count) {
  return parse_mot(read_text(path), path.string(), frame_count);
}

void write_mot(const std::filesystem::path& path, const TrackSet& tracks) { write_text_atomic(path, format_mot(tracks)); }

// ---------------------------------------------------------------------------------------------
// Corrections

CorrectionLog parse_corrections(std::string_view text, const std::string& source) {
  const auto rows = text::lines(text);
  if (rows.empty() || rows[0] != kCorrectionHeader) {
    fail(source, 1, "header must be '" + std::string(kCorrectionHeader) + "'");
  }
  CorrectionLog log;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::size_t line = i + 1;
    if (!rows[i].empty() && rows[i].front() == '#') continue;
    const auto f = text::split(rows[i], ',');
    if (f.size() != 4) fail(source, line, "expected 4 fields, got " + std::to_string(f.size()));
    std::array<long long, 4> v{};
    for (std::size_t k = 0; k < 4; ++k) {
      const auto n = text::to_int(f[k]);
      if (!n) fail(source, line, "field " + std::to_string(k + 1) + " must be an integer");
      v[k] = *n;
    }
    if (v[0] < 0 || v[0] > v[1]) fail(source, line, "need 0 <= frame_start <= frame_end");
    if (v[2] == v[3]) fail(source, line, "id_a must differ from id_b");
    log.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<PlayerId>(v[2]),
                   static_cast<PlayerId>(v[3])});
  }
  return log;
}

std::string format_corrections(const CorrectionLog& log) {
  std::string out(kCorrectionHeader);
  out += '\n';
  for (const CorrectionEntry& e : log)
    fmt::format_to(std::back_inserter(out), "{},{},{},{}\n", e.frame_start, e.frame_end, e.id_a, e.id_b);
  return out;
}

CorrectionLog read_corrections(const std::filesystem::path& path) {
  return parse_corrections(read_text(path), path.string());
}

// ---------------------------------------------------------------------------------------------
// Small formats

std::string format_occlusion_csv(std::span<const double> scores) {
  std::string out = "frame,occlusion\n";
  for (std::size_t i = 0; i < scores.size(); ++i) fmt::format_to(std::back_inserter(out), "{},{:.4f}\n", i, scores[i]);
  return out;
}

std::vector<double> parse_occlusion_csv(std::string_view text, const std::string& source) {
  const auto rows = text::lines(text);
  if (rows.empty() || rows[0] != "frame,occlusion") fail(source, 1, "header must be 'frame,occlusion'");
  std::vector<double> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = text::split(rows[i], ',');
    if (f.size() != 2) fail(source, i + 1, "expected 2 fields");
    const auto frame = text::to_int(f[0]);
    const auto v = text::to_double(f[1]);
    if (!frame || *frame != static_cast<long long>(out.size())) fail(source, i + 1, "frames must count up from 0");
    if (!v || *v < 0.0 || *v > 1.0) fail(source, i + 1, "occlusion must be in [0, 1]");
    out.push_back(*v);
  }
  return out;
}

std::string format_index_list(std::span<const int> indices) {
  std::string out;
  for (int i : indices) fmt::format_to(std::back_inserter(out), "{}\n", i);
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace vmtrack
