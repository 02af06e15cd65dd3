#include "vmtrack/vm_engine.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "vmtrack/assignment.hpp"
#include "vmtrack/error.hpp"

namespace vmtrack {

namespace {

std::string entry_name(std::size_t index, const CorrectionEntry& e) {
  return "correction entry " + std::to_string(index + 1) + " (" + std::to_string(e.frame_start) + "," +
         std::to_string(e.frame_end) + "," + std::to_string(e.id_a) + "," + std::to_string(e.id_b) + ")";
}

// Left-to-right key of a pose: head x when visible, else mean visible x.
std::optional<double> ordering_x(const Pose& pose) {
  if (pose[KeypointName::head].visible) return pose[KeypointName::head].x;
  double sum = 0.0;
  int n = 0;
  for (const Keypoint& k : pose.keypoints) {
    if (k.visible) {
      sum += k.x;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

// Total order on poses by geometry only, so that input order never matters.
bool geometric_less(const Pose& a, const Pose& b, double ax, double bx) {
  if (ax != bx) return ax < bx;
  for (std::size_t i = 0; i < kKeypointCount; ++i) {
    const Keypoint& ka = a.keypoints[i];
    const Keypoint& kb = b.keypoints[i];
    if (ka.visible != kb.visible) return ka.visible;
    if (ka.y != kb.y) return ka.y < kb.y;
    if (ka.x != kb.x) return ka.x < kb.x;
  }
  return false;
}

void remember(Pose& memory, const Pose& seen) {
  for (std::size_t i = 0; i < kKeypointCount; ++i) {
    if (seen.keypoints[i].visible) memory.keypoints[i] = seen.keypoints[i];
  }
}

void sort_by_id(PoseFrame& frame) {
  std::stable_sort(frame.poses.begin(), frame.poses.end(),
                   [](const Pose& a, const Pose& b) { return a.player_id.value_or(0) < b.player_id.value_or(0); });
}

}  // namespace

void VmConfig::validate() const {
  if (quantity != 1 && quantity != 3 && quantity != 6) {
    throw ValidationError("vm.quantity must be 1, 3 or 6 (got " + std::to_string(quantity) + ")");
  }
  if (size_px < 1) throw ValidationError("vm.size_px must be >= 1 (got " + std::to_string(size_px) + ")");
  for (std::size_t i = 0; i < palette.size(); ++i)
    for (std::size_t j = i + 1; j < palette.size(); ++j)
      if (palette[i] == palette[j]) throw ValidationError("vm.palette colors must be pairwise distinct");
}

PoseFrames assign_consistent_ids(const PoseFrames& frames) {
  PoseFrames out;
  out.reserve(frames.size());
  std::map<PlayerId, Pose> roster;  // id -> last known keypoints

  for (const PoseFrame& frame : frames) {
    if (frame.poses.size() > static_cast<std::size_t>(kMaxPlayers)) {
      throw ValidationError("frame " + std::to_string(frame.frame_index) + " has " +
                            std::to_string(frame.poses.size()) + " poses; capacity is " +
                            std::to_string(kMaxPlayers));
    }
    PoseFrame labeled{frame.frame_index, frame.poses};
    for (Pose& p : labeled.poses) p.player_id.reset();

    if (roster.empty()) {
      std::vector<std::pair<double, std::size_t>> order;
      for (std::size_t i = 0; i < labeled.poses.size(); ++i) {
        const auto x = ordering_x(labeled.poses[i]);
        if (!x) {
          throw ValidationError("frame " + std::to_string(frame.frame_index) + ": pose " + std::to_string(i) +
                                " has no visible keypoint to seed an identity");
        }
        order.emplace_back(*x, i);
      }
      std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
        return geometric_less(labeled.poses[a.second], labeled.poses[b.second], a.first, b.first);
      });
      PlayerId next = 1;
      for (const auto& [x, i] : order) {
        labeled.poses[i].player_id = next;
        roster[next] = labeled.poses[i];
        ++next;
      }
      sort_by_id(labeled);
      out.push_back(std::move(labeled));
      continue;
    }

    std::vector<PlayerId> ids;
    for (const auto& [id, pose] : roster) ids.push_back(id);
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(labeled.poses.size()), static_cast<Eigen::Index>(ids.size()));
    for (std::size_t i = 0; i < labeled.poses.size(); ++i) {
      for (std::size_t j = 0; j < ids.size(); ++j) {
        const auto d = mean_keypoint_distance(labeled.poses[i], roster.at(ids[j]));
        cost(i, j) = d ? *d : kForbidden<double>;
      }
    }
    const std::vector<int> assignment = solve_assignment(cost);
    for (std::size_t i = 0; i < labeled.poses.size(); ++i) {
      if (assignment[i] >= 0) labeled.poses[i].player_id = ids[static_cast<std::size_t>(assignment[i])];
    }
    for (std::size_t i = 0; i < labeled.poses.size(); ++i) {
      Pose& pose = labeled.poses[i];
      if (pose.player_id) continue;
      const bool any_finite = (cost.row(static_cast<Eigen::Index>(i)).array().isFinite()).any();
      if (!any_finite && !ids.empty()) {
        throw ValidationError("frame " + std::to_string(frame.frame_index) + ": pose " + std::to_string(i) +
                              " shares no visible keypoint with any identity");
      }
      if (roster.size() >= static_cast<std::size_t>(kMaxPlayers)) {
        throw ValidationError("frame " + std::to_string(frame.frame_index) + ": roster overflow beyond " +
                              std::to_string(kMaxPlayers) + " players");
      }
      PlayerId fresh = 1;
      while (roster.count(fresh) != 0) ++fresh;
      pose.player_id = fresh;
      roster[fresh] = Pose{};
    }
    for (const Pose& pose : labeled.poses) remember(roster[*pose.player_id], pose);
    sort_by_id(labeled);
    out.push_back(std::move(labeled));
  }
  return out;
}

PoseFrames apply_corrections(const PoseFrames& labeled, const CorrectionLog& log) {
  PoseFrames out = labeled;
  for (const PoseFrame& f : out) {
    for (const Pose& p : f.poses) {
      if (!p.player_id) throw ValidationError("apply_corrections requires identity-labeled poses");
    }
  }
  for (std::size_t k = 0; k < log.size(); ++k) {
    const CorrectionEntry& e = log[k];
    if (e.frame_start > e.frame_end) throw ValidationError(entry_name(k, e) + ": frame_start > frame_end");
    if (e.id_a == e.id_b) throw ValidationError(entry_name(k, e) + ": id_a equals id_b");
    bool seen_a = false;
    bool seen_b = false;
    for (const PoseFrame& f : out) {
      if (f.frame_index < e.frame_start || f.frame_index > e.frame_end) continue;
      for (const Pose& p : f.poses) {
        seen_a = seen_a || *p.player_id == e.id_a;
        seen_b = seen_b || *p.player_id == e.id_b;
      }
    }
    if (!seen_a) throw ValidationError(entry_name(k, e) + ": unknown id " + std::to_string(e.id_a));
    if (!seen_b) throw ValidationError(entry_name(k, e) + ": unknown id " + std::to_string(e.id_b));
    for (PoseFrame& f : out) {
      if (f.frame_index < e.frame_start || f.frame_index > e.frame_end) continue;
      for (Pose& p : f.poses) {
        if (*p.player_id == e.id_a) {
          p.player_id = e.id_b;
        } else if (*p.player_id == e.id_b) {
          p.player_id = e.id_a;
        }
      }
      sort_by_id(f);
    }
  }
  return out;
}

std::optional<double> body_height(const Pose& pose) noexcept {
  double lo = 0.0, hi = 0.0;
  int n = 0;
  for (const Keypoint& k : pose.keypoints) {
    if (!k.visible) continue;
    lo = n == 0 ? k.y : std::min(lo, k.y);
    hi = n == 0 ? k.y : std::max(hi, k.y);
    ++n;
  }
  if (n < 2) return std::nullopt;
  return hi - lo;
}

std::optional<double> median_body_height(const PoseFrames& frames) {
  std::vector<double> heights;
  for (const PoseFrame& f : frames)
    for (const Pose& p : f.poses)
      if (auto h = body_height(p); h && *h > 0.0) heights.push_back(*h);
  if (heights.empty()) return std::nullopt;
  const std::size_t mid = heights.size() / 2;
  std::nth_element(heights.begin(), heights.begin() + static_cast<std::ptrdiff_t>(mid), heights.end());
  double median = heights[mid];
  if (heights.size() % 2 == 0) {
    median = (median + *std::max_element(heights.begin(), heights.begin() + static_cast<std::ptrdiff_t>(mid))) / 2.0;
  }
  return median;
}

IdDiagnostics diagnose_ids(const PoseFrames& labeled, std::optional<double> threshold_px) {
  IdDiagnostics diag;
  diag.threshold_px = threshold_px ? *threshold_px : 0.15 * median_body_height(labeled).value_or(0.0);
  std::map<PlayerId, Pose> last;
  for (const PoseFrame& f : labeled) {
    double worst = 0.0;
    for (const Pose& p : f.poses) {
      if (!p.player_id) throw ValidationError("diagnose_ids requires identity-labeled poses");
      auto it = last.find(*p.player_id);
      if (it != last.end()) {
        if (auto d = mean_keypoint_distance(it->second, p)) {
          worst = std::max(worst, *d);
          if (*d > diag.threshold_px) diag.discontinuities.push_back({f.frame_index, *p.player_id, *d});
        }
      }
      if (p.visible_count() > 0) last[*p.player_id] = p;
    }
    diag.max_displacement.push_back(worst);
  }
  return diag;
}

std::vector<KeypointName> select_vm_keypoints(int quantity) {
  switch (quantity) {
    case 1:
      return {KeypointName::head};
    case 3:
      return {KeypointName::head, KeypointName::ankle_left, KeypointName::ankle_right};
    case 6:
      return {kAllKeypoints.begin(), kAllKeypoints.end()};
    default:
      throw ValidationError("vm quantity must be 1, 3 or 6 (got " + std::to_string(quantity) + ")");
  }
}

MarkerSet make_markers(const PoseFrame& frame, const VmConfig& config) {
  MarkerSet set{frame.frame_index, {}};
  const auto names = select_vm_keypoints(config.quantity);
  for (const Pose& pose : frame.poses) {
    if (!pose.player_id) throw ValidationError("markers require identity-labeled poses");
    const PlayerId id = *pose.player_id;
    if (id < 1 || id > kMaxPlayers) {
      throw ValidationError("player id " + std::to_string(id) + " has no palette color (ids 1-6)");
    }
    for (KeypointName name : names) {
      const Keypoint& k = pose[name];
      if (!k.visible) continue;
      set.markers.push_back({id, name, k.x, k.y, config.palette[static_cast<std::size_t>(id - 1)]});
    }
  }
  return set;
}

Image render_vm_overlay(const Image& image, const MarkerSet& markers, int size_px) {
  if (size_px < 1) throw ValidationError("marker size must be >= 1");
  Image out = image;
  for (const Marker& m : markers.markers) {
    if (!std::isfinite(m.x) || !std::isfinite(m.y)) continue;
    const double x0 = std::round(m.x) - size_px / 2;
    const double y0 = std::round(m.y) - size_px / 2;
    const int xa = static_cast<int>(std::clamp(x0, 0.0, static_cast<double>(out.width())));
    const int xb = static_cast<int>(std::clamp(x0 + size_px, 0.0, static_cast<double>(out.width())));
    const int ya = static_cast<int>(std::clamp(y0, 0.0, static_cast<double>(out.height())));
    const int yb = static_cast<int>(std::clamp(y0 + size_px, 0.0, static_cast<double>(out.height())));
    for (int y = ya; y < yb; ++y)
      for (int x = xa; x < xb; ++x) out.set(x, y, m.color);
  }
  return out;
}

}  // namespace vmtrack
