#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "vmtrack/cli.hpp"
#include "vmtrack/io.hpp"

using namespace vmtrack;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("vmtrack_cli_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("help and usage errors") {
  const Run h = run({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("evaluate") != std::string::npos);
  const Run sub = run({"convert", "--help"});
  CHECK(sub.code == 0);
  CHECK(sub.out.find("--pad-x") != std::string::npos);
  const Run bad = run({"evaluate", "--gt", "a", "--pred", "b", "--bogus"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("--bogus") != std::string::npos);
  CHECK(run({"convert", "--input", "x"}).code == 1);
  CHECK(run({"convert", "--input", "x", "--output", "y", "--method", "tight"}).code == 1);
}

TEST_CASE("missing input files exit with the io code") {
  TempDir dir("missing");
  const Run r = run({"evaluate", "--gt", (dir.path / "nope.txt").string(), "--pred", (dir.path / "nope.txt").string()});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("malformed input exits with the validation code and names the line") {
  TempDir dir("malformed");
  write_text_atomic(dir.path / "gt.txt", "1,1,0,0,5,5,1,-1,-1,-1\n1,2,0,0\n");
  const Run r = run({"evaluate", "--gt", (dir.path / "gt.txt").string(), "--pred", (dir.path / "gt.txt").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find(":2:") != std::string::npos);
}

TEST_CASE("evaluate: identical files score 100") {
  TempDir dir("eval");
  write_text_atomic(dir.path / "gt.txt",
                    "1,1,10.00,10.00,20.00,40.00,1.00,-1,-1,-1\n"
                    "1,2,60.00,10.00,20.00,40.00,1.00,-1,-1,-1\n"
                    "2,1,12.00,10.00,20.00,40.00,1.00,-1,-1,-1\n");
  const Run r = run({"evaluate", "--gt", (dir.path / "gt.txt").string(), "--pred", (dir.path / "gt.txt").string(),
                     "--csv", "-", "--table", (dir.path / "table.txt").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("sequence,hota,deta,assa,loca,fn,fp,ids\n") == 0);
  CHECK(r.out.find("gt,100.00,100.00,100.00,100.00,0,0,0\n") != std::string::npos);
  CHECK(read_text(dir.path / "table.txt").find("HOTA") != std::string::npos);
}

TEST_CASE("simulate, convert, track, evaluate and compare chain") {
  TempDir dir("chain");
  const std::string root = dir.path.string();
  REQUIRE(run({"simulate", "--out", root, "--count", "2", "--frames", "40"}).code == 0);
  for (const char* f : {"gt_poses.csv", "poses.csv", "poses_anon.csv", "gt.txt", "detections.txt", "occlusion.csv",
                        "scenario.json"})
    CHECK(fs::exists(dir.path / "seq001" / f));
  CHECK(fs::exists(dir.path / "seq002" / "gt.txt"));

  const std::string seq = root + "/{seq}/";
  REQUIRE(run({"assign-ids", "--input", seq + "poses_anon.csv", "--output", seq + "relabeled.csv"}).code == 0);
  REQUIRE(run({"convert", "--input", seq + "relabeled.csv", "--output", seq + "vm.txt"}).code == 0);
  REQUIRE(run({"track", "--input", seq + "detections.txt", "--output", seq + "sort.txt"}).code == 0);
  const Run e = run({"evaluate", "--gt", seq + "gt.txt", "--pred", seq + "vm.txt", "--csv", "-", "--table",
                     root + "/t.txt"});
  REQUIRE(e.code == 0);
  CHECK(e.out.find("\nseq001,") != std::string::npos);
  CHECK(e.out.find("\nseq002,") != std::string::npos);
  CHECK(e.out.find("\nmean,") != std::string::npos);
  const Run c = run({"compare", "--gt", seq + "gt.txt", "--pred", "VM=" + seq + "vm.txt", "--pred",
                     "Baseline=" + seq + "sort.txt"});
  REQUIRE(c.code == 0);
  CHECK(c.out.find("VM") != std::string::npos);
  CHECK(c.out.find("Baseline") != std::string::npos);
}

TEST_CASE("config file feeds defaults and flags override it") {
  TempDir dir("config");
  const std::string cfg = (dir.path / "c.json").string();
  write_text_atomic(cfg, R"({"sim": {"frames": 12, "players": 3}})");
  REQUIRE(run({"--config", cfg, "simulate", "--out", (dir.path / "a").string(), "--players", "2"}).code == 0);
  const auto poses = read_pose_file(dir.path / "a" / "seq001" / "gt_poses.csv");
  CHECK(poses.size() == 12);
  CHECK(poses[0].poses.size() == 2);
  write_text_atomic(cfg, R"({"vm": {"quantity": 4}})");
  CHECK(run({"--config", cfg, "simulate", "--out", (dir.path / "b").string()}).code == 1);
}

TEST_CASE("select-frames by occlusion and by k-means") {
  TempDir dir("select");
  const std::string root = dir.path.string();
  REQUIRE(run({"simulate", "--out", root, "--frames", "30", "--render"}).code == 0);
  const Run occ = run({"select-frames", "--method", "occlusion", "--boxes", root + "/seq001/gt.txt", "--count", "4"});
  REQUIRE(occ.code == 0);
  CHECK(std::count(occ.out.begin(), occ.out.end(), '\n') == 4);
  const std::string list = root + "/k.txt";
  REQUIRE(run({"select-frames", "--method", "kmeans", "--frames", root + "/seq001/frames", "--count", "3", "--output",
               list})
              .code == 0);
  CHECK(read_text(list) == run({"select-frames", "--method", "kmeans", "--frames", root + "/seq001/frames",
                                "--count", "3"})
                               .out);
  CHECK(run({"select-frames", "--method", "kmeans", "--frames", root + "/seq001/frames", "--count", "31"}).code == 1);
}

TEST_CASE("overlay writes one marked frame per raw frame") {
  TempDir dir("overlay");
  const std::string root = dir.path.string();
  REQUIRE(run({"simulate", "--out", root, "--frames", "3", "--render"}).code == 0);
  REQUIRE(run({"overlay", "--frames", root + "/seq001/frames", "--poses", root + "/seq001/gt_poses.csv", "--out",
               root + "/marked", "--size", "3", "--quantity", "3"})
              .code == 0);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir.path / "marked")) n += e.path().extension() == ".png";
  CHECK(n == 3);
  CHECK(run({"overlay", "--frames", root + "/seq001/frames", "--poses", root + "/seq001/gt_poses.csv", "--out",
             root + "/m2", "--quantity", "4"})
            .code == 1);
}
