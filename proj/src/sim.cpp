#include "vmtrack/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "vmtrack/error.hpp"
#include "vmtrack/frame_select.hpp"
#include "vmtrack/rng.hpp"

namespace vmtrack {

namespace {

constexpr int kZoneCols = 3;
constexpr int kHoldFrames = 3;
constexpr int kApproachFrames = 40;
constexpr double kEventOffsetFrac = 0.25;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Waypoint {
  int frame = 0;
  Vec2 pos;
  bool pinned = false;  // event waypoints survive pruning
};

struct Zone {
  double x0, x1, y0, y1;  // admissible foot-point rectangle
};

// Six zones in a 3 x 2 grid. Foot-point bounds keep the whole box (head to ankle, arms included)
// inside the zone, so players in different zones never overlap unless an event brings them together.
Zone zone_for(int index, const ScenarioConfig& cfg) {
  const double cw = static_cast<double>(cfg.width) / kZoneCols;
  const double rh = static_cast<double>(cfg.height) / 2.0;
  const int col = index % kZoneCols;
  const int row = index / kZoneCols;
  const double half_w = 0.45 * cfg.body_height_max;
  const double margin = 0.03 * cfg.height;
  Zone z{};
  z.x0 = col * cw + half_w;
  z.x1 = (col + 1) * cw - half_w;
  z.y0 = row * rh + cfg.body_height_max * 1.02 + margin;
  z.y1 = (row + 1) * rh - margin;
  if (z.x1 < z.x0) z.x1 = z.x0 = (col + 0.5) * cw;
  if (z.y1 < z.y0) z.y1 = z.y0 = std::min((row + 1) * rh - margin, static_cast<double>(cfg.height) - margin);
  return z;
}

Vec2 zone_center(const Zone& z) { return {(z.x0 + z.x1) / 2, (z.y0 + z.y1) / 2}; }

double smoothstep(double s) { return s * s * (3.0 - 2.0 * s); }

Vec2 interpolate(const std::vector<Waypoint>& wps, double t) {
  if (t <= wps.front().frame) return wps.front().pos;
  if (t >= wps.back().frame) return wps.back().pos;
  auto it = std::upper_bound(wps.begin(), wps.end(), t, [](double v, const Waypoint& w) { return v < w.frame; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  const double s = smoothstep((t - a.frame) / static_cast<double>(b.frame - a.frame));
  return {a.pos.x + (b.pos.x - a.pos.x) * s, a.pos.y + (b.pos.y - a.pos.y) * s};
}

double height_at(double foot_y, double individual, const ScenarioConfig& cfg) {
  const double depth = std::clamp(foot_y / cfg.height, 0.0, 1.0);
  const double t = std::clamp(0.8 * depth + 0.2 * individual, 0.0, 1.0);
  return cfg.body_height_min + (cfg.body_height_max - cfg.body_height_min) * t;
}

Pose skeleton(Vec2 foot, double h, double phase, PlayerId id) {
  Pose p;
  p.player_id = id;
  const double swing = std::sin(phase);
  const double bob = 0.01 * h * std::cos(2.0 * phase);
  auto put = [&](KeypointName n, double dx, double dy) { p[n] = {foot.x + dx * h, foot.y + dy * h, 1.0, true}; };
  put(KeypointName::head, 0.0, -1.0 + bob / h);
  put(KeypointName::elbow_left, -0.17 + 0.02 * swing, -0.62);
  put(KeypointName::elbow_right, 0.17 - 0.02 * swing, -0.62);
  put(KeypointName::center, 0.0, -0.48 + bob / h);
  put(KeypointName::ankle_left, -0.09 + 0.05 * swing, -0.02 * std::max(0.0, swing));
  put(KeypointName::ankle_right, 0.09 - 0.05 * swing, -0.02 * std::max(0.0, -swing));
  return p;
}

BBox gt_box(const Pose& p, double h, double arm_frac) {
  double x0 = p.keypoints[0].x, x1 = x0, y0 = p.keypoints[0].y, y1 = y0;
  for (const Keypoint& k : p.keypoints) {
    x0 = std::min(x0, k.x);
    x1 = std::max(x1, k.x);
    y0 = std::min(y0, k.y);
    y1 = std::max(y1, k.y);
  }
  const double arm = arm_frac * h;
  return {x0 - arm, y0, (x1 - x0) + 2.0 * arm, y1 - y0};
}

std::vector<ScreenEvent> random_events(const ScenarioConfig& cfg, Rng rng) {
  std::vector<ScreenEvent> out;
  if (cfg.random_screen_events <= 0 || cfg.players < 2) return out;
  std::vector<std::pair<int, int>> pairs;  // adjacent zones in one row
  for (int a = 1; a < cfg.players; ++a) {
    const int za = a - 1;
    const int zb = a;
    if (za / kZoneCols == zb / kZoneCols) pairs.emplace_back(a, a + 1);
  }
  if (pairs.empty()) return out;
  const int n = cfg.random_screen_events;
  for (int i = 0; i < n; ++i) {
    const double slot = static_cast<double>(cfg.frames) / (n + 1);
    const int jitter = static_cast<int>(rng.uniform_int(-static_cast<int>(slot / 6), static_cast<int>(slot / 6)));
    const int frame = std::clamp(static_cast<int>(slot * (i + 1)) + jitter, kHoldFrames, cfg.frames - 1 - kHoldFrames);
    const auto& pr = pairs[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pairs.size()) - 1))];
    out.push_back({frame, pr.first, pr.second});
  }
  return out;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (players < 1 || players > 6) throw ValidationError("sim.players must be in [1, 6]");
  if (frames < 1) throw ValidationError("sim.frames must be >= 1");
  if (width < 64 || height < 64) throw ValidationError("sim.width and sim.height must be >= 64");
  if (!(body_height_min > 0.0) || body_height_max < body_height_min) {
    throw ValidationError("sim body height range must satisfy 0 < min <= max");
  }
  if (body_height_max * 1.1 > height / 2.0) throw ValidationError("sim.body_height_max too large for the court");
  if (!(arm_extent_frac >= 0.0)) throw ValidationError("sim.arm_extent_frac must be >= 0");
  if (random_screen_events < 0) throw ValidationError("sim.random_screen_events must be >= 0");
  for (std::size_t i = 0; i < screen_events.size(); ++i) {
    const ScreenEvent& e = screen_events[i];
    const std::string name = "sim.screen_events[" + std::to_string(i) + "]";
    if (e.player_a == e.player_b) throw ValidationError(name + ": same player twice");
    if (e.player_a < 1 || e.player_a > players || e.player_b < 1 || e.player_b > players) {
      throw ValidationError(name + ": unknown player");
    }
    if (e.frame < 0 || e.frame >= frames) throw ValidationError(name + ": frame out of range");
  }
}

void DegradationConfig::validate() const {
  const auto prob = [](double p, const char* key) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string(key) + " must be in [0, 1]");
  };
  if (!(keypoint_noise_px >= 0.0)) throw ValidationError("degrade.keypoint_noise_px must be >= 0");
  prob(miss_rate, "degrade.miss_rate");
  prob(detector_miss_rate, "degrade.detector_miss_rate");
  prob(id_swap_rate, "degrade.id_swap_rate");
}

std::string sequence_name_for_seed(std::uint64_t seed) { return fmt::format("seq{:03d}", seed); }

Scenario generate(const ScenarioConfig& config) {
  config.validate();
  Scenario scn;
  scn.config = config;
  const Rng root(config.seed);

  scn.events = config.screen_events;
  const auto extra = random_events(config, root.split(1));
  scn.events.insert(scn.events.end(), extra.begin(), extra.end());
  std::stable_sort(scn.events.begin(), scn.events.end(),
                   [](const ScreenEvent& a, const ScreenEvent& b) { return a.frame < b.frame; });

  const int n = config.players;
  std::vector<std::vector<Waypoint>> paths(static_cast<std::size_t>(n));
  std::vector<double> individual(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng = root.split(100 + static_cast<std::uint64_t>(i));
    individual[static_cast<std::size_t>(i)] = rng.uniform();
    const Zone z = zone_for(i, config);
    auto& wps = paths[static_cast<std::size_t>(i)];
    Vec2 pos{rng.uniform(z.x0, z.x1), rng.uniform(z.y0, z.y1)};
    int frame = 0;
    wps.push_back({frame, pos, false});
    while (frame < config.frames - 1) {
      frame += static_cast<int>(rng.uniform_int(25, 45));
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double radius = rng.uniform(30.0, 120.0);
      pos = {std::clamp(pos.x + radius * std::cos(angle), z.x0, z.x1),
             std::clamp(pos.y + radius * std::sin(angle), z.y0, z.y1)};
      wps.push_back({frame, pos, false});
    }
  }

  // Events: both players pause side by side, the lower-zone-index one on the left.
  for (const ScreenEvent& e : scn.events) {
    const int ia = std::min(e.player_a, e.player_b) - 1;
    const int ib = std::max(e.player_a, e.player_b) - 1;
    const Vec2 pa = interpolate(paths[static_cast<std::size_t>(ia)], e.frame);
    const Vec2 pb = interpolate(paths[static_cast<std::size_t>(ib)], e.frame);
    const Vec2 ca = zone_center(zone_for(ia, config));
    const Vec2 cb = zone_center(zone_for(ib, config));
    const double foot_y = (pa.y + pb.y) / 2.0;
    const double mid_x = (ca.x + cb.x) / 2.0;
    const double h = 0.5 * (height_at(foot_y, individual[static_cast<std::size_t>(ia)], config) +
                            height_at(foot_y, individual[static_cast<std::size_t>(ib)], config));
    const double half = 0.5 * kEventOffsetFrac * h;
    const std::array<std::pair<int, Vec2>, 2> targets{{{ia, {mid_x - half, foot_y}}, {ib, {mid_x + half, foot_y}}}};
    for (const auto& [idx, target] : targets) {
      auto& wps = paths[static_cast<std::size_t>(idx)];
      std::erase_if(wps, [&](const Waypoint& w) {
        return !w.pinned && w.frame != 0 && std::abs(w.frame - e.frame) < kApproachFrames;
      });
      const int f0 = std::max(0, e.frame - kHoldFrames);
      const int f1 = std::min(config.frames - 1, e.frame + kHoldFrames);
      std::erase_if(wps, [&](const Waypoint& w) { return w.frame >= f0 && w.frame <= f1; });
      wps.push_back({f0, target, true});
      if (f1 != f0) wps.push_back({f1, target, true});
      std::sort(wps.begin(), wps.end(), [](const Waypoint& a, const Waypoint& b) { return a.frame < b.frame; });
    }
  }

  scn.gt_boxes.sequence_name = sequence_name_for_seed(config.seed);
  scn.gt_boxes.frame_count = config.frames;
  std::vector<double> phase(static_cast<std::size_t>(n), 0.0);
  std::vector<Vec2> prev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    phase[static_cast<std::size_t>(i)] = root.split(200 + static_cast<std::uint64_t>(i)).uniform(0.0, 2.0 * std::numbers::pi);
    prev[static_cast<std::size_t>(i)] = interpolate(paths[static_cast<std::size_t>(i)], 0.0);
  }
  for (int f = 0; f < config.frames; ++f) {
    PoseFrame frame{f, {}};
    std::vector<BBox> boxes;
    for (int i = 0; i < n; ++i) {
      const auto si = static_cast<std::size_t>(i);
      const Vec2 foot = interpolate(paths[si], f);
      const double h = height_at(foot.y, individual[si], config);
      phase[si] += 0.12 + std::hypot(foot.x - prev[si].x, foot.y - prev[si].y) / (0.15 * h);
      prev[si] = foot;
      Pose pose = skeleton(foot, h, phase[si], i + 1);
      const BBox box = gt_box(pose, h, config.arm_extent_frac);
      scn.gt_boxes.detections.push_back({f, i + 1, box, 1.0});
      boxes.push_back(box);
      frame.poses.push_back(std::move(pose));
    }
    scn.occlusion.push_back(occlusion_score(boxes));
    scn.gt_poses.push_back(std::move(frame));
  }
  return scn;
}

DegradedOutput degrade(const Scenario& scenario, const DegradationConfig& config) {
  config.validate();
  const Rng root(config.seed, 0x64656772616465ULL);
  const int n = scenario.config.players;
  const double sigma = config.keypoint_noise_px;

  std::vector<Rng> noise, miss, detector;
  for (int i = 0; i < n; ++i) {
    noise.push_back(root.split(1000 + static_cast<std::uint64_t>(i)));
    miss.push_back(root.split(2000 + static_cast<std::uint64_t>(i)));
    detector.push_back(root.split(3000 + static_cast<std::uint64_t>(i)));
  }
  Rng swap_rng = root.split(4000);
  Rng shuffle_rng = root.split(5000);

  // Persistent label swaps, one coin per event.
  std::vector<int> swap_frames;
  std::vector<std::pair<PlayerId, PlayerId>> swap_pairs;
  for (const ScreenEvent& e : scenario.events) {
    if (swap_rng.uniform() < config.id_swap_rate) {
      swap_frames.push_back(e.frame);
      swap_pairs.emplace_back(e.player_a, e.player_b);
    }
  }

  DegradedOutput out;
  out.detections.sequence_name = scenario.gt_boxes.sequence_name;
  out.detections.frame_count = scenario.gt_boxes.frame_count;
  const auto gt_by_frame = detections_by_frame(scenario.gt_boxes);

  std::vector<PlayerId> label(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) label[static_cast<std::size_t>(i)] = i;

  for (const PoseFrame& gt : scenario.gt_poses) {
    for (std::size_t k = 0; k < swap_frames.size(); ++k) {
      if (swap_frames[k] != gt.frame_index) continue;
      auto& la = label[static_cast<std::size_t>(swap_pairs[k].first)];
      auto& lb = label[static_cast<std::size_t>(swap_pairs[k].second)];
      std::swap(la, lb);
    }

    PoseFrame labeled{gt.frame_index, {}};
    for (const Pose& src : gt.poses) {
      const auto i = static_cast<std::size_t>(*src.player_id - 1);
      Pose p = src;
      for (Keypoint& k : p.keypoints) {
        const double dx = sigma * noise[i].normal();
        const double dy = sigma * noise[i].normal();
        const bool dropped = miss[i].uniform() < config.miss_rate;
        k.x += dx;
        k.y += dy;
        k.confidence = dropped ? 0.0 : 1.0 / (1.0 + std::hypot(dx, dy) / 20.0);
        k.visible = k.visible && !dropped;
      }
      p.player_id = label[static_cast<std::size_t>(*src.player_id)];
      labeled.poses.push_back(std::move(p));
    }
    std::sort(labeled.poses.begin(), labeled.poses.end(),
              [](const Pose& a, const Pose& b) { return *a.player_id < *b.player_id; });

    PoseFrame anonymous{gt.frame_index, labeled.poses};
    for (Pose& p : anonymous.poses) p.player_id.reset();
    for (std::size_t k = anonymous.poses.size(); k > 1; --k) {
      const auto j = static_cast<std::size_t>(shuffle_rng.uniform_int(0, static_cast<std::int64_t>(k) - 1));
      std::swap(anonymous.poses[k - 1], anonymous.poses[j]);
    }

    const double occ = scenario.occlusion[static_cast<std::size_t>(gt.frame_index)];
    const double p_miss = std::min(1.0, config.detector_miss_rate * (occ >= 0.3 ? 4.0 : 1.0));
    for (const Detection& d : gt_by_frame[static_cast<std::size_t>(gt.frame_index)]) {
      Rng& rng = detector[static_cast<std::size_t>(d.track_id - 1)];
      const bool dropped = rng.uniform() < p_miss;
      std::array<double, 4> jitter{};
      for (double& v : jitter) v = sigma * rng.normal();
      if (dropped) continue;
      BBox b{d.bbox.x + jitter[0], d.bbox.y + jitter[1], std::max(1.0, d.bbox.w + jitter[2]),
             std::max(1.0, d.bbox.h + jitter[3])};
      out.detections.detections.push_back({d.frame_index, -1, b, 1.0});
    }

    out.labeled.push_back(std::move(labeled));
    out.anonymous.push_back(std::move(anonymous));
  }
  return out;
}

Image render_frame(const Scenario& scenario, int frame_index) {
  const ScenarioConfig& cfg = scenario.config;
  Image img(cfg.width, cfg.height, {196, 154, 108});
  if (frame_index < 0 || frame_index >= static_cast<int>(scenario.gt_poses.size())) {
    throw ValidationError("frame " + std::to_string(frame_index) + " outside the scenario");
  }
  std::vector<const Pose*> order;
  for (const Pose& p : scenario.gt_poses[static_cast<std::size_t>(frame_index)].poses) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(), [](const Pose* a, const Pose* b) {
    return (*a)[KeypointName::center].y < (*b)[KeypointName::center].y;
  });
  const auto fill = [&](double x0, double y0, double x1, double y1, Rgb c) {
    const int ix0 = std::max(0, static_cast<int>(std::floor(x0)));
    const int iy0 = std::max(0, static_cast<int>(std::floor(y0)));
    const int ix1 = std::min(cfg.width, static_cast<int>(std::ceil(x1)));
    const int iy1 = std::min(cfg.height, static_cast<int>(std::ceil(y1)));
    for (int y = iy0; y < iy1; ++y)
      for (int x = ix0; x < ix1; ++x) img.set(x, y, c);
  };
  for (const Pose* p : order) {
    const Rgb jersey = *p->player_id <= 3 ? Rgb{232, 232, 232} : Rgb{48, 52, 72};
    const Rgb skin{150, 110, 85};
    const Keypoint& head = (*p)[KeypointName::head];
    const Keypoint& hip = (*p)[KeypointName::center];
    const double h = std::max((*p)[KeypointName::ankle_left].y, (*p)[KeypointName::ankle_right].y) - head.y;
    const double el = (*p)[KeypointName::elbow_left].x;
    const double er = (*p)[KeypointName::elbow_right].x;
    fill(el - 0.2 * h * cfg.arm_extent_frac, head.y + 0.2 * h, er + 0.2 * h * cfg.arm_extent_frac, hip.y, jersey);
    fill(head.x - 0.07 * h, head.y - 0.07 * h, head.x + 0.07 * h, head.y + 0.1 * h, skin);
    fill(std::min((*p)[KeypointName::ankle_left].x, hip.x - 0.08 * h), hip.y,
         std::max((*p)[KeypointName::ankle_right].x, hip.x + 0.08 * h), hip.y + 0.52 * h, skin);
  }
  return img;
}

}  // namespace vmtrack
