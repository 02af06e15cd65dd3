#include "vmtrack/bbox_convert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "vmtrack/error.hpp"
#include "vmtrack/vm_engine.hpp"

namespace vmtrack {

namespace {

struct Extent {
  double x0, y0, x1, y1;
};

std::optional<Extent> visible_extent(const Pose& pose) noexcept {
  Extent e{0, 0, 0, 0};
  int n = 0;
  for (const Keypoint& k : pose.keypoints) {
    if (!k.visible) continue;
    if (n == 0) {
      e = {k.x, k.y, k.x, k.y};
    } else {
      e.x0 = std::min(e.x0, k.x);
      e.y0 = std::min(e.y0, k.y);
      e.x1 = std::max(e.x1, k.x);
      e.y1 = std::max(e.y1, k.y);
    }
    ++n;
  }
  if (n < 2 || e.x1 - e.x0 <= 0.0 || e.y1 - e.y0 <= 0.0) return std::nullopt;
  return e;
}

double mean_visible_confidence(const Pose& pose) {
  double sum = 0.0;
  int n = 0;
  for (const Keypoint& k : pose.keypoints) {
    if (k.visible) {
      sum += k.confidence;
      ++n;
    }
  }
  return n > 0 ? sum / n : 0.0;
}

}  // namespace

void PaddingConfig::validate() const {
  if (!(pad_x_frac >= 0.0)) throw ValidationError("convert.pad_x_frac must be >= 0");
  if (!(pad_top_frac >= 0.0)) throw ValidationError("convert.pad_top_frac must be >= 0");
  if (!(pad_bottom_frac >= 0.0)) throw ValidationError("convert.pad_bottom_frac must be >= 0");
}

void SwitchFilterConfig::validate() const {
  if (!(distance_threshold_px > 0.0)) throw ValidationError("switch-filter threshold must be > 0");
}

std::string_view to_string(ConvertMethod method) noexcept {
  return method == ConvertMethod::maxmin ? "maxmin" : "padding";
}

ConvertMethod parse_convert_method(std::string_view text) {
  if (text == "maxmin" || text == "max_min") return ConvertMethod::maxmin;
  if (text == "padding") return ConvertMethod::padding;
  throw ValidationError("convert.method must be 'maxmin' or 'padding' (got '" + std::string(text) + "')");
}

Pose filter_switched_keypoints(const Pose& prev, const Pose& cur, const SwitchFilterConfig& cfg) {
  if (prev.player_id != cur.player_id) throw ValidationError("switch filter compares poses of one player only");
  Pose out = cur;
  for (KeypointName name : kAllKeypoints) {
    if (auto d = keypoint_distance(prev, cur, name); d && *d > cfg.distance_threshold_px) out[name].visible = false;
  }
  return out;
}

std::optional<BBox> maxmin_bbox(const Pose& pose) noexcept {
  const auto e = visible_extent(pose);
  if (!e) return std::nullopt;
  return BBox{e->x0, e->y0, e->x1 - e->x0, e->y1 - e->y0};
}

std::optional<BBox> padded_bbox(const Pose& pose, const PaddingConfig& cfg) noexcept {
  const auto e = visible_extent(pose);
  if (!e) return std::nullopt;
  const double h = e->y1 - e->y0;
  return BBox{e->x0 - cfg.pad_x_frac * h, e->y0 - cfg.pad_top_frac * h, (e->x1 - e->x0) + 2.0 * cfg.pad_x_frac * h,
              h * (1.0 + cfg.pad_top_frac + cfg.pad_bottom_frac)};
}

TrackSet convert_sequence(const PoseFrames& labeled, const ConvertOptions& options, std::string sequence_name) {
  options.padding.validate();
  TrackSet out;
  out.sequence_name = std::move(sequence_name);
  for (const PoseFrame& f : labeled) out.frame_count = std::max(out.frame_count, f.frame_index + 1);
  for (const PoseFrame& f : labeled)
    for (const Pose& p : f.poses)
      if (!p.player_id) throw ValidationError("convert requires identity-labeled poses");
  if (labeled.empty()) return out;

  SwitchFilterConfig filter;
  if (options.threshold_px) {
    filter.distance_threshold_px = *options.threshold_px;
  } else {
    filter.distance_threshold_px = 0.5 * median_body_height(labeled).value_or(0.0);
    if (filter.distance_threshold_px <= 0.0) filter.distance_threshold_px = std::numeric_limits<double>::infinity();
  }
  filter.validate();

  std::map<PlayerId, Pose> last_seen;
  for (const PoseFrame& f : labeled) {
    for (const Pose& raw : f.poses) {
      const PlayerId id = *raw.player_id;
      Pose pose = raw;
      if (auto it = last_seen.find(id); it != last_seen.end()) pose = filter_switched_keypoints(it->second, raw, filter);
      // The filtered pose becomes the reference, so a rejected keypoint does not also reject its recovery.
      last_seen[id] = pose;

      const auto box = options.method == ConvertMethod::maxmin ? maxmin_bbox(pose) : padded_bbox(pose, options.padding);
      if (!box) continue;
      out.detections.push_back({f.frame_index, id, *box, mean_visible_confidence(pose)});
    }
  }
  validate(out);
  return out;
}

}  // namespace vmtrack
