#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "vmtrack/error.hpp"
#include "vmtrack/sim.hpp"
#include "vmtrack/vm_engine.hpp"

using namespace vmtrack;

namespace {

// Upright stick figure of height 100 with feet at (x, y).
Pose figure(double x, double y, std::optional<PlayerId> id = {}) {
  Pose p;
  p.player_id = id;
  p[KeypointName::head] = {x, y - 100, 1, true};
  p[KeypointName::elbow_left] = {x - 15, y - 60, 1, true};
  p[KeypointName::elbow_right] = {x + 15, y - 60, 1, true};
  p[KeypointName::center] = {x, y - 50, 1, true};
  p[KeypointName::ankle_left] = {x - 8, y, 1, true};
  p[KeypointName::ankle_right] = {x + 8, y, 1, true};
  return p;
}

std::vector<PlayerId> ids_of(const PoseFrame& f) {
  std::vector<PlayerId> out;
  for (const Pose& p : f.poses) out.push_back(*p.player_id);
  return out;
}

PlayerId id_near(const PoseFrame& f, double x) {
  for (const Pose& p : f.poses)
    if (std::abs(p[KeypointName::center].x - x) < 10) return *p.player_id;
  return 0;
}

}  // namespace

TEST_CASE("first frame is numbered left to right by head x") {
  PoseFrames in{{0, {figure(500, 300), figure(100, 300), figure(300, 300)}}};
  const auto out = assign_consistent_ids(in);
  CHECK(id_near(out[0], 100) == 1);
  CHECK(id_near(out[0], 300) == 2);
  CHECK(id_near(out[0], 500) == 3);
  CHECK(ids_of(out[0]) == std::vector<PlayerId>{1, 2, 3});
}

TEST_CASE("smoothly translating poses keep their ids") {
  PoseFrames in;
  for (int f = 0; f < 50; ++f) {
    in.push_back({f, {figure(100 + 2.0 * f, 300), figure(300 - 1.5 * f, 320)}});
    if (f % 2) std::swap(in.back().poses[0], in.back().poses[1]);
  }
  const auto out = assign_consistent_ids(in);
  for (int f = 0; f < 50; ++f) {
    REQUIRE(id_near(out[f], 100 + 2.0 * f) == 1);
    REQUIRE(id_near(out[f], 300 - 1.5 * f) == 2);
  }
}

TEST_CASE("single pose keeps id 1") {
  PoseFrames in;
  for (int f = 0; f < 10; ++f) in.push_back({f, {figure(100 + f, 200)}});
  for (const auto& f : assign_consistent_ids(in)) CHECK(ids_of(f) == std::vector<PlayerId>{1});
}

TEST_CASE("teleport crossing follows the nearest neighbor") {
  // A at 100 and B at 200 jump to 190 and 110: 2x2 costs [[90, 10], [10, 90]] pick the swap.
  PoseFrames in{{0, {figure(100, 300), figure(200, 300)}}, {1, {figure(190, 300), figure(110, 300)}}};
  const auto out = assign_consistent_ids(in);
  CHECK(id_near(out[1], 190) == 2);
  CHECK(id_near(out[1], 110) == 1);
}

TEST_CASE("pose arriving later gets the lowest free id") {
  PoseFrames in{{0, {figure(100, 300)}}, {1, {figure(101, 300), figure(400, 300)}}};
  const auto out = assign_consistent_ids(in);
  CHECK(id_near(out[1], 101) == 1);
  CHECK(id_near(out[1], 400) == 2);
}

TEST_CASE("more than six poses is a capacity error") {
  PoseFrame f{0, {}};
  for (int i = 0; i < 7; ++i) f.poses.push_back(figure(100.0 * i, 300));
  CHECK_THROWS_AS((void)assign_consistent_ids({f}), ValidationError);
}

TEST_CASE("a pose sharing no visible keypoint with the roster is an error") {
  Pose head_only;
  head_only[KeypointName::head] = {10, 10, 1, true};
  Pose ankle_only;
  ankle_only[KeypointName::ankle_left] = {10, 10, 1, true};
  PoseFrames in{{0, {head_only}}, {1, {ankle_only}}};
  CHECK_THROWS_AS((void)assign_consistent_ids(in), ValidationError);
}

TEST_CASE("input order within frames does not change the labeling") {
  ScenarioConfig sc;
  sc.frames = 60;
  const Scenario scn = generate(sc);
  const DegradedOutput d = degrade(scn, {});
  PoseFrames shuffled = d.anonymous;
  std::mt19937_64 gen(1);
  for (auto& f : shuffled) std::shuffle(f.poses.begin(), f.poses.end(), gen);
  CHECK(assign_consistent_ids(shuffled) == assign_consistent_ids(d.anonymous));
}

TEST_CASE("undegraded anonymous poses are recovered up to a global permutation") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ScenarioConfig sc;
    sc.seed = seed;
    const Scenario scn = generate(sc);
    DegradationConfig clean;
    clean.keypoint_noise_px = clean.miss_rate = clean.detector_miss_rate = 0;
    const auto out = assign_consistent_ids(degrade(scn, clean).anonymous);
    std::map<PlayerId, PlayerId> perm;
    bool consistent = true;
    for (std::size_t f = 0; f < out.size(); ++f) {
      for (const Pose& p : out[f].poses) {
        const auto it = std::find_if(scn.gt_poses[f].poses.begin(), scn.gt_poses[f].poses.end(),
                                     [&](const Pose& g) { return g.keypoints == p.keypoints; });
        REQUIRE(it != scn.gt_poses[f].poses.end());
        auto [slot, fresh] = perm.emplace(*p.player_id, *it->player_id);
        consistent = consistent && (fresh || slot->second == *it->player_id);
      }
    }
    CHECK(consistent);
  }
}

TEST_CASE("corrections: empty log is the identity and a swap is an involution") {
  PoseFrames in;
  for (int f = 0; f < 20; ++f) in.push_back({f, {figure(100, 300, 1), figure(300, 300, 2)}});
  CHECK(apply_corrections(in, {}) == in);
  const CorrectionLog twice{{0, 19, 1, 2}, {0, 19, 1, 2}};
  CHECK(apply_corrections(in, twice) == in);
}

TEST_CASE("corrections repair a swapped range") {
  PoseFrames in;
  for (int f = 0; f < 20; ++f) {
    const bool swapped = f >= 5 && f <= 10;
    in.push_back({f, {figure(100 + f, 300, swapped ? 2 : 1), figure(300 - f, 300, swapped ? 1 : 2)}});
  }
  CHECK_FALSE(diagnose_ids(in).discontinuities.empty());
  const auto fixed = apply_corrections(in, {{5, 10, 1, 2}});
  CHECK(diagnose_ids(fixed).discontinuities.empty());
  for (const auto& f : fixed) CHECK(id_near(f, 100 + f.frame_index) == 1);
}

TEST_CASE("corrections name the offending entry") {
  PoseFrames in{{0, {figure(100, 300, 1), figure(300, 300, 2)}}};
  try {
    (void)apply_corrections(in, {{0, 0, 1, 2}, {0, 0, 1, 9}});
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("correction entry 2 (0,0,1,9)") != std::string::npos);
  }
  CHECK_THROWS_AS((void)apply_corrections(in, {{3, 1, 1, 2}}), ValidationError);
  CHECK_THROWS_AS((void)apply_corrections(in, {{0, 0, 1, 1}}), ValidationError);
}

TEST_CASE("label swaps injected by degradation show up in diagnostics") {
  ScenarioConfig sc;
  sc.random_screen_events = 0;
  sc.screen_events = {{60, 2, 3}};
  const Scenario scn = generate(sc);
  DegradationConfig dc;
  dc.id_swap_rate = 1.0;
  const auto diag = diagnose_ids(degrade(scn, dc).labeled);
  REQUIRE(diag.discontinuities.size() == 2);
  CHECK(diag.discontinuities[0].frame_index == 60);
}

TEST_CASE("marker keypoint subsets") {
  CHECK(select_vm_keypoints(1) == std::vector<KeypointName>{KeypointName::head});
  CHECK(select_vm_keypoints(3) ==
        std::vector<KeypointName>{KeypointName::head, KeypointName::ankle_left, KeypointName::ankle_right});
  CHECK(select_vm_keypoints(6).size() == 6);
  CHECK_THROWS_AS((void)select_vm_keypoints(4), ValidationError);
}

TEST_CASE("vm config validation") {
  VmConfig c;
  CHECK_NOTHROW(c.validate());
  c.quantity = 4;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.quantity = 3;
  c.size_px = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.size_px = 1;
  c.palette[5] = c.palette[0];
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("markers take the palette color of their id and skip hidden keypoints") {
  PoseFrame f{0, {figure(100, 300, 4)}};
  f.poses[0][KeypointName::ankle_left].visible = false;
  VmConfig c;
  c.quantity = 3;
  const MarkerSet m = make_markers(f, c);
  REQUIRE(m.markers.size() == 2);
  CHECK(m.markers[0].color == kDefaultPalette[3]);
  CHECK(m.markers[1].keypoint == KeypointName::ankle_right);
}

TEST_CASE("render: size 1 rounds to the nearest pixel") {
  const Image img(40, 40, {1, 2, 3});
  const Image out = render_vm_overlay(img, {0, {{1, KeypointName::head, 10.4, 20.6, {255, 0, 0}}}}, 1);
  int changed = 0;
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 40; ++x) changed += !(out.at(x, y) == img.at(x, y));
  CHECK(changed == 1);
  CHECK(out.at(10, 21) == Rgb{255, 0, 0});
}

TEST_CASE("render: interior size-3 square is nine pixels, corner square is clipped to four") {
  const Image img(40, 40);
  const auto count = [&](const Image& out) {
    int n = 0;
    for (int y = 0; y < 40; ++y)
      for (int x = 0; x < 40; ++x) n += !(out.at(x, y) == img.at(x, y));
    return n;
  };
  CHECK(count(render_vm_overlay(img, {0, {{1, KeypointName::head, 20, 20, {9, 9, 9}}}}, 3)) == 9);
  CHECK(count(render_vm_overlay(img, {0, {{1, KeypointName::head, 0, 0, {9, 9, 9}}}}, 3)) == 4);
  CHECK(count(render_vm_overlay(img, {0, {{1, KeypointName::head, -50, 900, {9, 9, 9}}}}, 3)) == 0);
}

TEST_CASE("render: even sizes extend toward the top-left and later markers win") {
  const Image img(10, 10);
  const Image out = render_vm_overlay(
      img, {0, {{1, KeypointName::head, 5, 5, {1, 1, 1}}, {2, KeypointName::head, 5, 5, {2, 2, 2}}}}, 2);
  CHECK(out.at(4, 4) == Rgb{2, 2, 2});
  CHECK(out.at(5, 5) == Rgb{2, 2, 2});
  CHECK(out.at(6, 6) == Rgb{});
}

TEST_CASE("body height and median") {
  CHECK(*body_height(figure(0, 100)) == 100.0);
  Pose one;
  one[KeypointName::head] = {0, 0, 1, true};
  CHECK_FALSE(body_height(one).has_value());
  PoseFrames fs{{0, {figure(0, 100), figure(0, 100)}}, {1, {figure(0, 100)}}};
  fs[1].poses[0][KeypointName::head].y = 40;  // height 60
  CHECK(*median_body_height(fs) == 100.0);
}
