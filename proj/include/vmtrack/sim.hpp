#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vmtrack/geometry.hpp"
#include "vmtrack/image.hpp"

namespace vmtrack {

/// Two players converge to within a fraction of a body height at `frame`, pause, then separate.
struct ScreenEvent {
  int frame = 0;
  PlayerId player_a = 0;
  PlayerId player_b = 0;

  friend bool operator==(const ScreenEvent&, const ScreenEvent&) = default;
};

struct ScenarioConfig {
  int players = 6;
  int frames = 180;
  int width = 1280;
  int height = 720;
  std::uint64_t seed = 1;
  std::vector<ScreenEvent> screen_events;
  /// Extra events drawn from the seed between horizontally adjacent players.
  int random_screen_events = 2;
  double body_height_min = 120.0;
  double body_height_max = 180.0;
  /// Latent horizontal arm reach on each side, as a fraction of body height.
  double arm_extent_frac = 0.2;

  void validate() const;
};

struct DegradationConfig {
  double keypoint_noise_px = 2.0;
  double miss_rate = 0.001;
  double detector_miss_rate = 0.05;
  double id_swap_rate = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Scenario {
  ScenarioConfig config;
  std::vector<ScreenEvent> events;  // resolved: configured plus random, sorted by frame
  PoseFrames gt_poses;
  TrackSet gt_boxes;
  std::vector<double> occlusion;  // per-frame max pairwise IoU of gt boxes
};

struct DegradedOutput {
  PoseFrames labeled;
  PoseFrames anonymous;
  TrackSet detections;  // track_id = -1
};

/// Deterministic scenario from the config (seed included).
[[nodiscard]] Scenario generate(const ScenarioConfig& config);

/// Pose-model and detector style corruption of a scenario. Deterministic for a given seed;
/// every channel draws from its own stream so toggling one never perturbs another.
[[nodiscard]] DegradedOutput degrade(const Scenario& scenario, const DegradationConfig& config);

/// Sequence naming used by batch runs: "seq001" for seed 1.
[[nodiscard]] std::string sequence_name_for_seed(std::uint64_t seed);

/// Flat-shaded synthetic frame: court background, players as jersey-colored silhouettes drawn
/// back to front. Teammates share a color, so identity is not recoverable from appearance.
[[nodiscard]] Image render_frame(const Scenario& scenario, int frame_index);

}  // namespace vmtrack
