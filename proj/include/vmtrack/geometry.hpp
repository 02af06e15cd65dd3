#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vmtrack {

/// The six body landmarks tracked per player. Order here is the canonical file order.
enum class KeypointName : std::uint8_t {
  head = 0,
  elbow_left,
  elbow_right,
  center,
  ankle_left,
  ankle_right,
};

inline constexpr std::size_t kKeypointCount = 6;

inline constexpr std::array<KeypointName, kKeypointCount> kAllKeypoints{
    KeypointName::head,       KeypointName::elbow_left, KeypointName::elbow_right,
    KeypointName::center,     KeypointName::ankle_left, KeypointName::ankle_right,
};

[[nodiscard]] std::string_view to_string(KeypointName name) noexcept;
[[nodiscard]] std::optional<KeypointName> parse_keypoint_name(std::string_view text) noexcept;

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;  // [0, 1]
  bool visible = false;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

using PlayerId = int;

/// One skeleton. Not-visible keypoints keep their last estimated coordinates.
struct Pose {
  std::array<Keypoint, kKeypointCount> keypoints{};
  std::optional<PlayerId> player_id;

  [[nodiscard]] Keypoint& operator[](KeypointName n) { return keypoints[static_cast<std::size_t>(n)]; }
  [[nodiscard]] const Keypoint& operator[](KeypointName n) const {
    return keypoints[static_cast<std::size_t>(n)];
  }

  [[nodiscard]] std::size_t visible_count() const noexcept;

  friend bool operator==(const Pose&, const Pose&) = default;
};

struct PoseFrame {
  int frame_index = 0;
  std::vector<Pose> poses;

  friend bool operator==(const PoseFrame&, const PoseFrame&) = default;
};

using PoseFrames = std::vector<PoseFrame>;

/// Axis-aligned box, top-left corner plus extent (MOTChallenge convention).
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  [[nodiscard]] double right() const noexcept { return x + w; }
  [[nodiscard]] double bottom() const noexcept { return y + h; }
  [[nodiscard]] bool valid() const noexcept { return w > 0.0 && h > 0.0; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

struct Detection {
  int frame_index = 0;
  int track_id = 0;
  BBox bbox;
  double confidence = 1.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct TrackSet {
  std::string sequence_name;
  std::vector<Detection> detections;
  int frame_count = 0;

  friend bool operator==(const TrackSet&, const TrackSet&) = default;
};

/// Intersection over union; 0 for disjoint boxes.
[[nodiscard]] double iou(const BBox& a, const BBox& b) noexcept;

/// Euclidean distance between the named keypoints, or nullopt if either is not visible.
[[nodiscard]] std::optional<double> keypoint_distance(const Pose& a, const Pose& b, KeypointName name) noexcept;

/// Mean distance over keypoints visible in both poses; nullopt if none is shared.
[[nodiscard]] std::optional<double> mean_keypoint_distance(const Pose& a, const Pose& b) noexcept;

/// Throws ValidationError when the TrackSet violates frame-range or (frame, id) uniqueness.
void validate(const TrackSet& tracks);

/// Detections regrouped per frame; index i holds frame i.
[[nodiscard]] std::vector<std::vector<Detection>> detections_by_frame(const TrackSet& tracks);

}  // namespace vmtrack
