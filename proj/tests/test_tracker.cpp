#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "vmtrack/hota.hpp"
#include "vmtrack/sim.hpp"
#include "vmtrack/tracker.hpp"

using namespace vmtrack;

namespace {

Detection det(int f, BBox b) { return {f, -1, b, 1.0}; }

}  // namespace

TEST_CASE("associate: disjoint boxes match nothing") {
  const std::vector<BBox> tracks{{0, 0, 10, 10}};
  const std::vector<Detection> dets{det(0, {50, 50, 10, 10})};
  const Association a = associate(tracks, dets, 0.3);
  CHECK(a.matches.empty());
  CHECK(a.unmatched_tracks == std::vector<int>{0});
  CHECK(a.unmatched_detections == std::vector<int>{0});
}

TEST_CASE("associate: identical boxes match one to one") {
  const std::vector<BBox> tracks{{0, 0, 10, 10}, {100, 0, 10, 10}, {200, 0, 10, 10}};
  const std::vector<Detection> dets{det(0, tracks[2]), det(0, tracks[0]), det(0, tracks[1])};
  const Association a = associate(tracks, dets, 0.3);
  CHECK(a.matches == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}});
}

TEST_CASE("associate never returns a pair under iou_min and equals brute force") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0, 40), s(10, 30);
  for (int t = 0; t < 300; ++t) {
    std::vector<BBox> tracks;
    std::vector<Detection> dets;
    for (int i = 0; i < 4; ++i) tracks.push_back({u(gen), u(gen), s(gen), s(gen)});
    for (int i = 0; i < 4; ++i) dets.push_back(det(0, {u(gen), u(gen), s(gen), s(gen)}));
    const Association a = associate(tracks, dets, 0.3);
    std::vector<std::vector<double>> cost(4, std::vector<double>(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const double o = oracle::box_iou(tracks[i], dets[j].bbox);
        cost[i][j] = o >= 0.3 ? 1.0 - o : std::numeric_limits<double>::infinity();
      }
    const auto want = oracle::brute_assignment(cost);
    std::vector<int> got(4, -1);
    for (auto [ti, di] : a.matches) {
      REQUIRE(iou(tracks[ti], dets[di].bbox) >= 0.3);
      got[ti] = di;
    }
    REQUIRE(got == want.row_to_col);
  }
}

TEST_CASE("track lifecycle: confirm on the third hit, die after max_misses") {
  TrackerConfig cfg;
  cfg.max_misses = 2;
  BaselineTracker t(cfg);
  const BBox b{10, 10, 20, 40};
  const std::vector<Detection> one{det(0, b)};
  CHECK(t.step(0, one).empty());
  CHECK(t.step(1, one).empty());
  const auto third = t.step(2, one);
  REQUIRE(third.size() == 1);
  CHECK(third[0].track_id == 1);
  for (int f = 3; f < 5; ++f) CHECK(t.step(f, {}).empty());
  CHECK(t.live_tracks().size() == 1);
  (void)t.step(5, {});
  CHECK(t.live_tracks().empty());
  // A fresh detection starts a new id; ids are never reused.
  (void)t.step(6, one);
  REQUIRE(t.live_tracks().size() == 1);
  CHECK(t.live_tracks()[0].track_id == 2);
}

TEST_CASE("a tentative track dies on its first miss") {
  BaselineTracker t;
  const std::vector<Detection> one{det(0, {0, 0, 10, 10})};
  (void)t.step(0, one);
  (void)t.step(1, {});
  CHECK(t.live_tracks().empty());
}

TEST_CASE("empty detection stream gives an empty track set") {
  TrackSet in{"e", {}, 10};
  const TrackSet out = track(in);
  CHECK(out.detections.empty());
  CHECK(out.frame_count == 10);
}

TEST_CASE("clean non-crossing detections give one track per player and no switches") {
  ScenarioConfig sc;
  sc.random_screen_events = 0;
  sc.seed = 4;
  const Scenario scn = generate(sc);
  TrackSet dets = scn.gt_boxes;
  for (auto& d : dets.detections) d.track_id = -1;
  const TrackSet out = track(dets);
  std::set<int> ids;
  for (const auto& d : out.detections) ids.insert(d.track_id);
  CHECK(ids.size() == 6);
  const EvalReport r = compute_hota(scn.gt_boxes, out);
  CHECK(r.ids == 0);
  CHECK(r.fn == 12);  // two unconfirmed frames per player
}

TEST_CASE("screen event with detection dropout produces an identity switch") {
  ScenarioConfig sc;
  sc.random_screen_events = 0;
  sc.screen_events = {{90, 1, 2}};
  sc.seed = 2;
  const Scenario scn = generate(sc);
  // Both players of the event vanish from detection while they are overlapped.
  TrackSet dets = scn.gt_boxes;
  std::erase_if(dets.detections, [&](const Detection& d) {
    return d.track_id <= 2 && scn.occlusion[static_cast<std::size_t>(d.frame_index)] >= 0.3;
  });
  for (auto& d : dets.detections) d.track_id = -1;
  const EvalReport r = compute_hota(scn.gt_boxes, track(dets));
  CHECK(r.ids >= 1);
}

TEST_CASE("tracking is deterministic") {
  ScenarioConfig sc;
  const Scenario scn = generate(sc);
  DegradationConfig dc;
  dc.detector_miss_rate = 0.2;
  const TrackSet dets = degrade(scn, dc).detections;
  CHECK(track(dets) == track(dets));
}
