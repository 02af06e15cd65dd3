#pragma once

#include <array>
#include <optional>
#include <vector>

#include "vmtrack/geometry.hpp"
#include "vmtrack/image.hpp"

namespace vmtrack {

inline constexpr int kMaxPlayers = 6;

/// Red, green, blue, yellow, magenta, cyan, indexed by player id - 1.
inline constexpr std::array<Rgb, kMaxPlayers> kDefaultPalette{{
    {255, 0, 0}, {0, 255, 0}, {0, 0, 255}, {255, 255, 0}, {255, 0, 255}, {0, 255, 255},
}};

struct VmConfig {
  int size_px = 1;
  int quantity = 6;
  std::array<Rgb, kMaxPlayers> palette = kDefaultPalette;

  /// Throws ValidationError unless quantity is 1, 3 or 6, size_px >= 1 and colors are distinct.
  void validate() const;
};

struct Marker {
  PlayerId player_id = 0;
  KeypointName keypoint = KeypointName::head;
  double x = 0.0;
  double y = 0.0;
  Rgb color;
};

struct MarkerSet {
  int frame_index = 0;
  std::vector<Marker> markers;
};

/// Swap directive: within [frame_start, frame_end], ids a and b trade places.
struct CorrectionEntry {
  int frame_start = 0;
  int frame_end = 0;
  PlayerId id_a = 0;
  PlayerId id_b = 0;

  friend bool operator==(const CorrectionEntry&, const CorrectionEntry&) = default;
};

using CorrectionLog = std::vector<CorrectionEntry>;

/// Labels anonymous poses with identities that stay consistent over time.
///
/// The first frame's poses are numbered 1.. from left to right by head x. Every later frame is
/// matched to each identity's last known keypoints by minimum total mean keypoint distance.
/// A pose left over while fewer than six identities exist receives the lowest unused id.
/// Throws ValidationError for frames with more than six poses, for a pose that shares no visible
/// keypoint with any identity, or when the roster would exceed six players.
[[nodiscard]] PoseFrames assign_consistent_ids(const PoseFrames& frames);

/// Applies swap directives in order. Throws ValidationError naming the entry when a directive
/// is malformed or references an id absent from its frame range.
[[nodiscard]] PoseFrames apply_corrections(const PoseFrames& labeled, const CorrectionLog& log);

struct Discontinuity {
  int frame_index = 0;
  PlayerId player_id = 0;
  double displacement = 0.0;
};

/// Per-frame identity jump report used to locate frames that need correcting.
struct IdDiagnostics {
  double threshold_px = 0.0;
  std::vector<double> max_displacement;  // per frame; 0 when nothing comparable
  std::vector<Discontinuity> discontinuities;
};

/// Flags every (frame, id) whose mean keypoint displacement from that id's previous appearance
/// exceeds the threshold. Without a threshold, 0.15 x median body height is used.
[[nodiscard]] IdDiagnostics diagnose_ids(const PoseFrames& labeled, std::optional<double> threshold_px = {});

/// Keypoints that become markers: 1 -> head, 3 -> head and ankles, 6 -> all.
[[nodiscard]] std::vector<KeypointName> select_vm_keypoints(int quantity);

/// Markers for the visible selected keypoints of every labeled pose in a frame.
[[nodiscard]] MarkerSet make_markers(const PoseFrame& frame, const VmConfig& config);

/// Paints a filled size_px square per marker centered at the rounded coordinate, clipped to the
/// image. Even sizes extend one extra pixel toward the top-left. Later markers overwrite earlier.
[[nodiscard]] Image render_vm_overlay(const Image& image, const MarkerSet& markers, int size_px);

/// Visible-keypoint vertical extent, or nullopt with fewer than two visible keypoints.
[[nodiscard]] std::optional<double> body_height(const Pose& pose) noexcept;

/// Median of body_height over every pose in the sequence; nullopt when no pose qualifies.
[[nodiscard]] std::optional<double> median_body_height(const PoseFrames& frames);

}  // namespace vmtrack
