#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "vmtrack/error.hpp"
#include "vmtrack/frame_select.hpp"
#include "vmtrack/sim.hpp"

using namespace vmtrack;

namespace {

std::vector<FrameFeature> blobs(int per_blob, int blobs, std::uint64_t seed, double spread = 0.05) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n(0.0, spread);
  std::vector<FrameFeature> out;
  for (int b = 0; b < blobs; ++b) {
    for (int i = 0; i < per_blob; ++i) {
      Eigen::VectorXd v(8);
      for (int d = 0; d < 8; ++d) v[d] = (d == b % 8 ? 5.0 * (1 + b / 8) : 0.0) + n(gen);
      out.push_back({static_cast<int>(out.size()), v});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("feature is a box-filtered grayscale downsample") {
  Image img(64, 64, {255, 255, 255});
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 64; ++x) img.set(x, y, {0, 0, 0});
  const FrameFeature f = extract_feature(img, 7, 4);
  CHECK(f.frame_index == 7);
  REQUIRE(f.feature.size() == 16);
  for (int i = 0; i < 8; ++i) CHECK(f.feature[i] == doctest::Approx(0.0));
  for (int i = 8; i < 16; ++i) CHECK(f.feature[i] == doctest::Approx(1.0));
  CHECK(extract_feature(img, 0).feature.size() == kFeatureSide * kFeatureSide);
}

TEST_CASE("kmeans with k equal to the frame count selects every frame") {
  const auto fs = blobs(3, 4, 2);
  const auto r = kmeans_select(fs, static_cast<int>(fs.size()), 1);
  std::vector<int> all(fs.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  CHECK(r.selected == all);
}

TEST_CASE("kmeans picks one frame per separated blob") {
  const auto fs = blobs(10, 2, 3);
  const auto r = kmeans_select(fs, 2, 9);
  REQUIRE(r.selected.size() == 2);
  CHECK(r.selected[0] < 10);
  CHECK(r.selected[1] >= 10);
}

TEST_CASE("kmeans objective never increases and the final assignment is stable") {
  const auto fs = blobs(10, 5, 4, 1.5);
  const auto r = kmeans_select(fs, 5, 11);
  REQUIRE(!r.objective.empty());
  for (std::size_t i = 1; i < r.objective.size(); ++i) CHECK(r.objective[i] <= r.objective[i - 1] + 1e-9);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    Eigen::Index best = 0;
    (r.centroids.rowwise() - fs[i].feature.transpose()).rowwise().squaredNorm().minCoeff(&best);
    CHECK(r.labels[i] == static_cast<int>(best));
  }
  CHECK(std::is_sorted(r.selected.begin(), r.selected.end()));
  CHECK(std::set<int>(r.selected.begin(), r.selected.end()).size() == 5);
}

TEST_CASE("kmeans is deterministic for a seed and rejects k above the frame count") {
  const auto fs = blobs(6, 3, 5, 2.0);
  const auto a = kmeans_select(fs, 4, 77);
  const auto b = kmeans_select(fs, 4, 77);
  CHECK(a.selected == b.selected);
  CHECK(a.labels == b.labels);
  CHECK(a.centroids == b.centroids);
  CHECK_THROWS_AS((void)kmeans_select(fs, 19, 1), ValidationError);
}

TEST_CASE("occlusion score") {
  const std::vector<BBox> disjoint{{0, 0, 10, 10}, {20, 0, 10, 10}};
  CHECK(occlusion_score(disjoint) == 0.0);
  const std::vector<BBox> same{{3, 4, 10, 10}, {3, 4, 10, 10}};
  CHECK(occlusion_score(same) == 1.0);
  std::vector<BBox> three{{0, 0, 10, 10}, {5, 0, 10, 10}, {100, 100, 5, 5}};
  CHECK(occlusion_score(three) == doctest::Approx(1.0 / 3.0));
  std::reverse(three.begin(), three.end());
  CHECK(occlusion_score(three) == doctest::Approx(1.0 / 3.0));
  const std::vector<BBox> one{{0, 0, 1, 1}};
  CHECK(occlusion_score(one) == 0.0);
  CHECK(occlusion_score({}) == 0.0);
}

TEST_CASE("occlusion select with no gap is the top-n with lower index on ties") {
  const std::vector<double> s{0.1, 0.5, 0.5, 0.9, 0.0, 0.5};
  const auto pick = occlusion_prioritized_select(s, 3, 0);
  CHECK(pick == std::vector<int>{3, 1, 2});
  double worst_selected = 1, best_other = 0;
  for (int i = 0; i < 6; ++i) {
    const bool in = std::find(pick.begin(), pick.end(), i) != pick.end();
    (in ? worst_selected : best_other) = in ? std::min(worst_selected, s[i]) : std::max(best_other, s[i]);
  }
  CHECK(worst_selected >= best_other);
}

TEST_CASE("occlusion select respects the gap and falls back when it runs out") {
  const std::vector<double> flat(100, 0.2);
  CHECK(occlusion_prioritized_select(flat, 3, 10) == std::vector<int>{0, 10, 20});
  const std::vector<double> few(6, 0.0);
  const auto pick = occlusion_prioritized_select(few, 4, 5);
  CHECK(pick == std::vector<int>{0, 5, 1, 2});
  CHECK_THROWS_AS((void)occlusion_prioritized_select(few, 7, 0), ValidationError);
  CHECK_THROWS_AS((void)occlusion_prioritized_select(few, 0, 0), ValidationError);
}

TEST_CASE("scripted events are picked before unoccluded frames") {
  ScenarioConfig sc;
  sc.random_screen_events = 0;
  sc.screen_events = {{40, 1, 2}, {130, 4, 5}};
  const Scenario scn = generate(sc);
  const auto scores = occlusion_scores(scn.gt_boxes);
  REQUIRE(scores.size() == 180);
  const auto order = occlusion_prioritized_select(scores, 60, 5);
  const auto first_clear = std::find_if(order.begin(), order.end(), [&](int f) { return scores[f] < 0.1; });
  for (int ev : {40, 130}) {
    const auto hit = std::find_if(order.begin(), order.end(), [&](int f) { return std::abs(f - ev) <= 5; });
    CHECK(hit < first_clear);
  }
}
