#pragma once

#include <optional>

#include "vmtrack/geometry.hpp"

namespace vmtrack {

/// Offsets as fractions of body height (visible-keypoint vertical extent).
struct PaddingConfig {
  double pad_x_frac = 0.15;
  double pad_top_frac = 0.05;
  double pad_bottom_frac = 0.05;

  void validate() const;
};

struct SwitchFilterConfig {
  double distance_threshold_px = 0.0;

  void validate() const;
};

enum class ConvertMethod { maxmin, padding };

[[nodiscard]] std::string_view to_string(ConvertMethod method) noexcept;
[[nodiscard]] ConvertMethod parse_convert_method(std::string_view text);

/// Marks keypoints of `cur` not visible when they moved farther than the threshold since `prev`.
/// Throws ValidationError if the poses carry different player ids.
[[nodiscard]] Pose filter_switched_keypoints(const Pose& prev, const Pose& cur, const SwitchFilterConfig& cfg);

/// Tight box over visible keypoints; nullopt with fewer than two or a zero extent.
[[nodiscard]] std::optional<BBox> maxmin_bbox(const Pose& pose) noexcept;

/// Max_Min box grown by stature-relative offsets.
[[nodiscard]] std::optional<BBox> padded_bbox(const Pose& pose, const PaddingConfig& cfg) noexcept;

struct ConvertOptions {
  ConvertMethod method = ConvertMethod::padding;
  PaddingConfig padding;
  /// Absolute switch-filter threshold; defaults to 0.5 x the sequence's median body height.
  std::optional<double> threshold_px;
};

/// Identity-labeled pose frames to one detection per player per frame.
/// Throws ValidationError on anonymous input.
[[nodiscard]] TrackSet convert_sequence(const PoseFrames& labeled, const ConvertOptions& options,
                                        std::string sequence_name = {});

}  // namespace vmtrack
