#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vmtrack/error.hpp"
#include "vmtrack/hota.hpp"
#include "vmtrack/report.hpp"

using namespace vmtrack;

namespace {

TrackSet set_of(std::vector<Detection> d, int frames) { return {"t", std::move(d), frames}; }

}  // namespace

TEST_CASE("alpha grid is 0.05 to 0.95") {
  const auto g = alpha_grid();
  CHECK(g.front() == doctest::Approx(0.05));
  CHECK(g.back() == doctest::Approx(0.95));
  CHECK(g.size() == 19);
}

TEST_CASE("swap fixture") {
  const BBox a{0, 0, 10, 10}, b{100, 0, 10, 10};
  const auto gt = set_of({{0, 1, a, 1}, {0, 2, b, 1}, {1, 1, a, 1}, {1, 2, b, 1}}, 2);
  const auto pred = set_of({{0, 1, a, 1}, {0, 2, b, 1}, {1, 1, b, 1}, {1, 2, a, 1}}, 2);
  const EvalReport r = compute_hota(gt, pred);
  CHECK(r.deta == doctest::Approx(100.0));
  CHECK(r.assa == doctest::Approx(100.0 / 3.0));
  CHECK(r.hota == doctest::Approx(100.0 * std::sqrt(1.0 / 3.0)));
  CHECK(r.loca == doctest::Approx(100.0));
  CHECK(r.ids == 2);
  CHECK(r.fn == 0);
  CHECK(r.fp == 0);
}

TEST_CASE("empty prediction scores zero with every gt box a miss") {
  const auto gt = set_of({{0, 1, {0, 0, 5, 5}, 1}, {1, 1, {0, 0, 5, 5}, 1}}, 2);
  const EvalReport r = compute_hota(gt, set_of({}, 2));
  CHECK(r.hota == 0.0);
  CHECK(r.loca == 0.0);
  CHECK(r.fn == 2);
  CHECK(r.fp == 0);
}

TEST_CASE("half-shifted prediction only matches at low thresholds") {
  // IoU 1/3 -> matched for alpha <= 0.3 (6 of 19 thresholds).
  const auto gt = set_of({{0, 1, {0, 0, 10, 10}, 1}}, 1);
  const auto pred = set_of({{0, 7, {5, 0, 10, 10}, 1}}, 1);
  const EvalReport r = compute_hota(gt, pred);
  CHECK(r.deta == doctest::Approx(100.0 * 6.0 / 19.0));
  CHECK(r.loca == doctest::Approx(100.0 / 3.0));
  CHECK(r.fn == 1);
  CHECK(r.fp == 1);
}

TEST_CASE("match_frame prefers more pairs over a larger single IoU") {
  // Greedy would take gt 2 / pred 1 (IoU 0.82) and strand gt 1.
  const std::vector<Detection> gt{{0, 1, {0, 0, 10, 10}, 1}, {0, 2, {4, 0, 10, 10}, 1}};
  const std::vector<Detection> pred{{0, 1, {3, 0, 10, 10}, 1}, {0, 2, {8, 0, 10, 10}, 1}};
  const FrameMatching m = match_frame(gt, pred, 0.3);
  REQUIRE(m.pairs.size() == 2);
  CHECK(m.pairs[0].pred_id == 1);
  CHECK(m.pairs[1].pred_id == 2);
  CHECK(m.fn_ids.empty());
  CHECK(m.fp_ids.empty());
}

TEST_CASE("compute_hota agrees with exhaustive enumeration") {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 200; ++i) {
    const auto [gt, pred] = oracle::random_instance(gen, 3, 4, 3);
    const EvalReport r = compute_hota(gt, pred);
    const auto b = oracle::brute_hota(gt, pred);
    REQUIRE(r.hota == doctest::Approx(b.hota).epsilon(1e-12));
    REQUIRE(r.deta == doctest::Approx(b.deta).epsilon(1e-12));
    REQUIRE(r.assa == doctest::Approx(b.assa).epsilon(1e-12));
    REQUIRE(r.loca == doctest::Approx(b.loca).epsilon(1e-12));
    REQUIRE(r.fn == b.fn);
    REQUIRE(r.fp == b.fp);
    REQUIRE(r.ids == b.ids);
  }
}

TEST_CASE("frame-count mismatch is rejected") {
  CHECK_THROWS_AS((void)compute_hota(set_of({}, 3), set_of({}, 4)), ValidationError);
}

TEST_CASE("aggregate of 70, 72, 74 is 72 +- 2") {
  std::vector<EvalReport> rs(3);
  rs[0].hota = 70;
  rs[1].hota = 72;
  rs[2].hota = 74;
  const AggregateReport a = aggregate(rs);
  CHECK(a.hota.mean == doctest::Approx(72.0));
  CHECK(a.hota.std == doctest::Approx(2.0));
  CHECK(aggregate(rs, StdKind::population).hota.std == doctest::Approx(std::sqrt(8.0 / 3.0)));
  CHECK_THROWS_AS((void)aggregate(std::span<const EvalReport>{}), ValidationError);
}

TEST_CASE("a single sequence has zero sample deviation") {
  const std::vector<double> one{5.0};
  CHECK(summarize(one).std == 0.0);
}

TEST_CASE("report table and csv layout") {
  std::vector<EvalReport> rs(2);
  rs[0].sequence = "seq001";
  rs[0].hota = 70;
  rs[1].sequence = "seq002";
  rs[1].hota = 74;
  const AggregateReport a = aggregate(rs);
  const std::string csv = format_report_csv(rs, a);
  CHECK(csv.rfind("sequence,hota,deta,assa,loca,fn,fp,ids\nseq001,70.00,", 0) == 0);
  CHECK(csv.find("\nmean,72.00,") != std::string::npos);
  const std::vector<TableRow> rows{{"vm", a}};
  const std::string table = format_table(rows);
  CHECK(table.rfind("Method", 0) == 0);
  CHECK(table.find("72.0 ± 2.8") != std::string::npos);
}
