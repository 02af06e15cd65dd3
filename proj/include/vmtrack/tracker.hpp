#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vmtrack/geometry.hpp"
#include "vmtrack/kalman.hpp"

namespace vmtrack {

struct TrackerConfig {
  double iou_min = 0.3;
  int confirm_hits = 3;
  int max_misses = 30;
  KalmanNoise<double> noise;
};

struct Association {
  std::vector<std::pair<int, int>> matches;  // (track index, detection index)
  std::vector<int> unmatched_tracks;
  std::vector<int> unmatched_detections;
};

/// Hungarian assignment on 1 - IoU; pairs below iou_min are never matched.
[[nodiscard]] Association associate(std::span<const BBox> tracks, std::span<const Detection> detections,
                                    double iou_min);

/// SORT-style tracking-by-detection: predict, associate, update, manage lifecycle.
class BaselineTracker {
 public:
  explicit BaselineTracker(TrackerConfig config = {}) : config_(std::move(config)) {}

  /// Processes one frame and returns boxes of confirmed tracks matched in it.
  std::vector<Detection> step(int frame_index, std::span<const Detection> detections);

  [[nodiscard]] const std::vector<KalmanTrackState<double>>& live_tracks() const noexcept { return tracks_; }

 private:
  TrackerConfig config_;
  std::vector<KalmanTrackState<double>> tracks_;
  int next_id_ = 1;
};

/// Runs the baseline over a detection stream. Input track ids are ignored.
[[nodiscard]] TrackSet track(const TrackSet& detections, const TrackerConfig& config = {});

}  // namespace vmtrack
