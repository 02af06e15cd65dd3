#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vmtrack/error.hpp"
#include "vmtrack/geometry.hpp"

using namespace vmtrack;

TEST_CASE("iou of half-overlapping unit squares") {
  CHECK(iou({0, 0, 10, 10}, {5, 0, 10, 10}) == doctest::Approx(50.0 / 150.0));
}

TEST_CASE("iou of disjoint and touching boxes is zero") {
  CHECK(iou({0, 0, 10, 10}, {20, 20, 5, 5}) == 0.0);
  CHECK(iou({0, 0, 10, 10}, {10, 0, 10, 10}) == 0.0);
}

TEST_CASE("iou of a box with itself is exactly one") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-500, 500), s(0.01, 300);
  for (int i = 0; i < 1000; ++i) {
    const BBox b{u(gen), u(gen), s(gen), s(gen)};
    REQUIRE(iou(b, b) == 1.0);
  }
}

TEST_CASE("iou is symmetric, bounded, and agrees with the reference formula") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0, 50), s(1, 40);
  for (int i = 0; i < 2000; ++i) {
    const BBox a{u(gen), u(gen), s(gen), s(gen)};
    const BBox b{u(gen), u(gen), s(gen), s(gen)};
    const double v = iou(a, b);
    REQUIRE(v == iou(b, a));
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
    REQUIRE(v == doctest::Approx(oracle::box_iou(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("keypoint distance is a 3-4-5 triangle") {
  Pose a, b;
  a[KeypointName::head] = {0, 0, 1, true};
  b[KeypointName::head] = {3, 4, 1, true};
  CHECK(*keypoint_distance(a, b, KeypointName::head) == 5.0);
  b[KeypointName::head].visible = false;
  CHECK_FALSE(keypoint_distance(a, b, KeypointName::head).has_value());
}

TEST_CASE("mean keypoint distance uses only shared visible keypoints") {
  Pose a, b;
  a[KeypointName::head] = {0, 0, 1, true};
  b[KeypointName::head] = {0, 2, 1, true};
  a[KeypointName::center] = {0, 0, 1, true};
  b[KeypointName::center] = {0, 4, 1, true};
  a[KeypointName::ankle_left] = {0, 0, 1, true};
  CHECK(*mean_keypoint_distance(a, b) == 3.0);
  CHECK_FALSE(mean_keypoint_distance(Pose{}, Pose{}).has_value());
}

TEST_CASE("keypoint names round-trip") {
  for (KeypointName n : kAllKeypoints) CHECK(parse_keypoint_name(to_string(n)) == n);
  CHECK_FALSE(parse_keypoint_name("knee").has_value());
}

TEST_CASE("validate rejects duplicate ids, out-of-range frames and empty boxes") {
  TrackSet ok{"s", {{0, 1, {0, 0, 1, 1}, 1}, {1, 1, {0, 0, 1, 1}, 1}}, 2};
  CHECK_NOTHROW(validate(ok));
  TrackSet dup = ok;
  dup.detections.push_back({0, 1, {5, 5, 1, 1}, 1});
  CHECK_THROWS_AS(validate(dup), ValidationError);
  TrackSet range = ok;
  range.detections.push_back({2, 2, {0, 0, 1, 1}, 1});
  CHECK_THROWS_AS(validate(range), ValidationError);
  TrackSet empty = ok;
  empty.detections[0].bbox.w = 0;
  CHECK_THROWS_AS(validate(empty), ValidationError);
}

TEST_CASE("detections_by_frame groups by frame index") {
  TrackSet t{"s", {{1, 1, {0, 0, 1, 1}, 1}, {0, 2, {0, 0, 1, 1}, 1}, {1, 3, {0, 0, 1, 1}, 1}}, 3};
  const auto by = detections_by_frame(t);
  REQUIRE(by.size() == 3);
  CHECK(by[0].size() == 1);
  CHECK(by[1].size() == 2);
  CHECK(by[2].empty());
}
