#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "perc/experiments.hpp"

using namespace perc;

namespace {

std::string golden_header(const std::string& name) {
  std::ifstream in(std::string(PERC_TEST_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  return line;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> run(int (*cmd)(const RunConfig&, std::ostream&), const RunConfig& cfg, int expect = 0) {
  std::ostringstream os;
  CHECK(cmd(cfg, os) == expect);
  return lines_of(os.str());
}

}  // namespace

TEST_CASE("header constants match the golden files") {
  CHECK(golden_header("profile.csv") == kProfileHeader);
  CHECK(golden_header("trajectory.csv") == kTrajectoryHeader);
  CHECK(golden_header("glauber.csv") == kGlauberHeader);
  CHECK(golden_header("win_curve_exact.csv") == kWinCurveExactHeader);
  CHECK(golden_header("win_curve_mc.csv") == kWinCurveMcHeader);
  CHECK(golden_header("draw_scan.csv") == kDrawScanHeader);
  CHECK(golden_header("solve2d.csv") == kSolve2dHeader);
}

TEST_CASE("config json round trip") {
  RunConfig cfg;
  cfg.command = "draw-scan";
  cfg.families = {"z2", "even:3"};
  cfg.p_grid = {0.05, 0.1};
  cfg.depths = {20, 40};
  cfg.sizes = {16, 16};
  cfg.seeds = {3, 4, 5};
  cfg.variant = "extended";
  cfg.out = "scan.csv";
  const RunConfig back = config_from_json(to_json(cfg));
  CHECK(back.command == cfg.command);
  CHECK(back.families == cfg.families);
  CHECK(back.p_grid == cfg.p_grid);
  CHECK(back.depths == cfg.depths);
  CHECK(back.sizes == cfg.sizes);
  CHECK(back.seeds == cfg.seeds);
  CHECK(back.variant == cfg.variant);
  CHECK(back.out == cfg.out);
  CHECK(to_json(back) == to_json(cfg));

  const RunConfig short_form = config_from_json(R"({"family": "bcc:3", "p": 0.3, "depth": 12, "seeds": "0:4"})");
  CHECK(short_form.families == std::vector<std::string>{"bcc:3"});
  CHECK(short_form.p_grid == std::vector<double>{0.3});
  CHECK(short_form.depths == std::vector<int>{12});
  CHECK(short_form.seeds == std::vector<std::uint64_t>{0, 1, 2, 3});
  CHECK_THROWS_AS(config_from_json(R"({"depht": 3})"), Error);
  CHECK_THROWS_AS(config_from_json("[1,2"), Error);
}

TEST_CASE("argument parsers") {
  CHECK(parse_seeds("3") == std::vector<std::uint64_t>{0, 1, 2});
  CHECK(parse_seeds("5:8") == std::vector<std::uint64_t>{5, 6, 7});
  CHECK(parse_seeds("1,9") == std::vector<std::uint64_t>{1, 9});
  CHECK(parse_p_grid("0.1,0.25") == std::vector<double>{0.1, 0.25});
  CHECK(parse_sizes("32x16") == std::vector<Coord>{32, 16});
  CHECK(parse_sizes("8,8") == std::vector<Coord>{8, 8});
  CHECK(parse_variant("extended") == UpdateVariant::kExtended);
  CHECK_THROWS_AS(parse_variant("fast"), Error);
  CHECK_THROWS_AS(parse_seeds("x"), Error);
  CHECK(default_sizes(GraphFamily::z2()) == std::vector<Coord>{256});
  CHECK(default_sizes(GraphFamily::even_sublattice(3)) == std::vector<Coord>{32, 32});
}

TEST_CASE("solve2d output") {
  RunConfig cfg;
  cfg.depths = {30};
  cfg.p_grid = {0.0, 1.0};
  cfg.seeds = {1};
  const auto lines = run(cmd_solve2d, cfg);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == golden_header("solve2d.csv"));
  // 465 interior sites of Triangle2D(30): all draws at p = 0, all closed at p = 1.
  CHECK(lines[1] == "0,30,1,0,0,0,465");
  CHECK(lines[2] == "1,30,1,465,0,0,0");

  const std::string image = "solve2d_test.ppm";
  cfg.p_grid = {0.3};
  cfg.image = image;
  run(cmd_solve2d, cfg);
  std::ifstream in(image, std::ios::binary);
  std::string header;
  std::getline(in, header);
  CHECK(header == "P6");
  in.close();
  std::remove(image.c_str());
}

TEST_CASE("win curve output") {
  RunConfig cfg;
  cfg.p_grid = {0.5, 1.0};
  cfg.seeds.clear();
  auto lines = run(cmd_win_curve, cfg);
  CHECK(lines[0] == golden_header("win_curve_exact.csv"));
  CHECK(lines[2] == "1,1,1");

  cfg.seeds = parse_seeds("20");
  cfg.depths = {10};
  cfg.p_grid = {1.0};
  lines = run(cmd_win_curve, cfg);
  CHECK(lines[0] == golden_header("win_curve_mc.csv"));
  CHECK(lines[1] == "1,10,20,1,0,1");
}

TEST_CASE("draw scan output") {
  RunConfig cfg;
  cfg.families = {"z2", "zd:3"};
  cfg.p_grid = {1.0};
  cfg.depths = {6};
  cfg.sizes = {};
  cfg.seeds = {1, 2};
  const auto lines = run(cmd_draw_scan, cfg);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == golden_header("draw_scan.csv"));
  CHECK(lines[1] == "z2,1,6,0,0,0,0,2");
  CHECK(lines[2] == "zd:3,1,6,nan,nan,0,0,2");
}

TEST_CASE("glauber output") {
  RunConfig cfg;
  cfg.families = {"z2"};
  cfg.sizes = {16};
  cfg.p_grid = {1.0};
  cfg.steps = 3;
  cfg.seeds = {1, 2};
  cfg.init = "class0";
  const auto lines = run(cmd_glauber, cfg);
  CHECK(lines[0] == golden_header("glauber.csv"));
  REQUIRE(lines.size() == 7);
  CHECK(lines[5] == "3,0,0,0");
  CHECK(lines[6] == "3,1,0,0");
}

TEST_CASE("couple-verify and pca-run output") {
  RunConfig cfg;
  cfg.families = {"z2", "subset:3"};
  cfg.depths = {10};
  cfg.sizes = {};
  cfg.p_grid = {0.3};
  cfg.seeds = {0, 1};
  auto lines = run(cmd_couple_verify, cfg);
  CHECK(lines[0] == golden_header("couple_verify.csv"));
  REQUIRE(lines.size() == 5);
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(lines[i].substr(lines[i].rfind(',')) == ",0");

  RunConfig pca;
  pca.kind = "stavskaya";
  pca.init = "1";
  pca.sizes = {64};
  pca.p_grid = {1.0};
  pca.steps = 2;
  pca.seeds = {1};
  lines = run(cmd_pca_run, pca);
  CHECK(lines[0] == golden_header("trajectory.csv"));
  REQUIRE(lines.size() == 4);
  CHECK(lines[1] == "0,0,0,1");
}

TEST_CASE("verify rejects short rings") {
  RunConfig cfg;
  cfg.ring = 4;
  std::ostringstream os;
  try {
    cmd_verify(cfg, os);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRingTooSmall);
  }
  cfg.ring = 6;
  const auto lines = run(cmd_verify, cfg);
  CHECK(lines[0].rfind("PASS", 0) == 0);
}
