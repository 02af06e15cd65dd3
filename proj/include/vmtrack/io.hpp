#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmtrack/geometry.hpp"
#include "vmtrack/vm_engine.hpp"

namespace vmtrack {

// Pose CSV
//   frame,player,det,keypoint,x,y,confidence,visible
// `player` is an integer id (det is "-") for labeled files, "-" (det is the per-frame pose index)
// for anonymous ones. Rows are ordered by frame, then id or det, then keypoint order; every pose
// lists all six keypoints. x, y and confidence carry three fractional digits.
inline constexpr std::string_view kPoseHeader = "frame,player,det,keypoint,x,y,confidence,visible";

[[nodiscard]] PoseFrames parse_pose_csv(std::string_view text, const std::string& source = "<pose>");
[[nodiscard]] std::string format_pose_csv(const PoseFrames& frames);
[[nodiscard]] PoseFrames read_pose_file(const std::filesystem::path& path);
void write_pose_file(const std::filesystem::path& path, const PoseFrames& frames);

// MOTChallenge text: "frame,id,x,y,w,h,conf,-1,-1,-1", 1-based frames on disk.
[[nodiscard]] TrackSet parse_mot(std::string_view text, const std::string& source = "<mot>",
                                 std::optional<int> frame_count = {});
[[nodiscard]] std::string format_mot(const TrackSet& tracks);
[[nodiscard]] TrackSet read_mot(const std::filesystem::path& path, std::optional<int> frame_count = {});
void write_mot(const std::filesystem::path& path, const TrackSet& tracks);

// Correction log: header "frame_start,frame_end,id_a,id_b", one swap per row, '#' comments allowed.
inline constexpr std::string_view kCorrectionHeader = "frame_start,frame_end,id_a,id_b";

[[nodiscard]] CorrectionLog parse_corrections(std::string_view text, const std::string& source = "<corrections>");
[[nodiscard]] std::string format_corrections(const CorrectionLog& log);
[[nodiscard]] CorrectionLog read_corrections(const std::filesystem::path& path);

// Occlusion labels: "frame,occlusion" with four fractional digits.
[[nodiscard]] std::string format_occlusion_csv(std::span<const double> scores);
[[nodiscard]] std::vector<double> parse_occlusion_csv(std::string_view text, const std::string& source = "<occlusion>");

// Newline-separated frame indices.
[[nodiscard]] std::string format_index_list(std::span<const int> indices);

[[nodiscard]] std::string read_text(const std::filesystem::path& path);
/// Writes via a temporary sibling and rename, creating parent directories.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace vmtrack
