#include "vmtrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "vmtrack/error.hpp"

namespace vmtrack {

namespace {
constexpr std::array<std::string_view, kKeypointCount> kNames{
    "head", "elbow_left", "elbow_right", "center", "ankle_left", "ankle_right",
};
}  // namespace

std::string_view to_string(KeypointName name) noexcept { return kNames[static_cast<std::size_t>(name)]; }

std::optional<KeypointName> parse_keypoint_name(std::string_view text) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == text) return static_cast<KeypointName>(i);
  }
  return std::nullopt;
}

std::size_t Pose::visible_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(keypoints.begin(), keypoints.end(), [](const Keypoint& k) { return k.visible; }));
}

double iou(const BBox& a, const BBox& b) noexcept {
  // Areas come from the same corner arithmetic as the intersection so that iou(a, a) is exactly 1.
  const double ax1 = a.right(), ay1 = a.bottom();
  const double bx1 = b.right(), by1 = b.bottom();
  const double iw = std::min(ax1, bx1) - std::max(a.x, b.x);
  const double ih = std::min(ay1, by1) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double area_a = (ax1 - a.x) * (ay1 - a.y);
  const double area_b = (bx1 - b.x) * (by1 - b.y);
  const double uni = area_a + area_b - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::optional<double> keypoint_distance(const Pose& a, const Pose& b, KeypointName name) noexcept {
  const Keypoint& ka = a[name];
  const Keypoint& kb = b[name];
  if (!ka.visible || !kb.visible) return std::nullopt;
  return std::hypot(ka.x - kb.x, ka.y - kb.y);
}

std::optional<double> mean_keypoint_distance(const Pose& a, const Pose& b) noexcept {
  double sum = 0.0;
  int n = 0;
  for (KeypointName name : kAllKeypoints) {
    if (auto d = keypoint_distance(a, b, name)) {
      sum += *d;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

void validate(const TrackSet& tracks) {
  std::set<std::pair<int, int>> seen;
  for (const Detection& d : tracks.detections) {
    if (d.frame_index < 0 || d.frame_index >= tracks.frame_count) {
      throw ValidationError("detection frame " + std::to_string(d.frame_index) + " outside [0, " +
                            std::to_string(tracks.frame_count) + ")");
    }
    if (!d.bbox.valid()) {
      throw ValidationError("detection at frame " + std::to_string(d.frame_index) + " has non-positive size");
    }
    if (!seen.emplace(d.frame_index, d.track_id).second) {
      throw ValidationError("duplicate (frame " + std::to_string(d.frame_index) + ", id " +
                            std::to_string(d.track_id) + ")");
    }
  }
}

std::vector<std::vector<Detection>> detections_by_frame(const TrackSet& tracks) {
  std::vector<std::vector<Detection>> out(static_cast<std::size_t>(std::max(tracks.frame_count, 0)));
  for (const Detection& d : tracks.detections) {
    if (d.frame_index >= 0 && d.frame_index < tracks.frame_count) out[d.frame_index].push_back(d);
  }
  return out;
}

}  // namespace vmtrack
