#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "spindle/experiment.hpp"
#include "spindle/types.hpp"

using namespace spindle;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("spindle_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing") {
  const std::string text =
      "# comment\n"
      "[experiment]\n"
      "command = dowker\n"
      "seed = 42\n"
      "\n"
      "[generator]\n"
      "kind = circle\n"
      "radius = 1.5\n";
  auto cfg = parse_config_text(text, "<test>");
  CHECK(cfg.command == "dowker");
  CHECK(cfg.seed == 42);
  CHECK(cfg.get("generator.kind", "") == "circle");
  CHECK(cfg.get_num("generator.radius", 0.0) == doctest::Approx(1.5));
  CHECK(cfg.get_int("dowker.grid", 2048) == 2048);  // fallback
  CHECK_THROWS_AS(cfg.require("missing.key"), Error);
}

TEST_CASE("config parse errors carry line numbers") {
  auto expect_msg = [](const std::string& text, const std::string& needle) {
    try {
      parse_config_text(text, "cfg");
      FAIL("expected parse error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_msg("key = 1\n", "cfg:1");                       // key outside section
  expect_msg("[experiment]\nnonsense line\n", "cfg:2");   // missing '='
  expect_msg("[broken\ncommand = x\n", "cfg:1");          // malformed header
  expect_msg("[experiment]\nseed = 1\n", "command");      // no command
}

TEST_CASE("config numeric validation") {
  auto cfg = parse_config_text(
      "[experiment]\ncommand = dowker\n[dowker]\ngrid = abc\n", "<test>");
  CHECK_THROWS_AS(cfg.get_int("dowker.grid", 0), Error);
  CHECK_THROWS_AS(cfg.get_num("dowker.grid", 0.0), Error);
}

TEST_CASE("reconstruct command writes curve CSV and summary JSON") {
  const fs::path dir = fresh_dir("reconstruct");
  auto cfg = parse_config_text(
      "[experiment]\ncommand = reconstruct\n"
      "[disk]\nkind = circle\nradius = 1\nsamples = 1024\n",
      "<test>");
  cfg.out_dir = dir.string();
  cfg.svg = true;
  CHECK(run_experiment(cfg) == 0);
  const std::string csv = slurp(dir / "reconstruct.csv");
  CHECK(csv.rfind("s,x,y,phi,kappa", 0) == 0);
  const std::string j = slurp(dir / "reconstruct.json");
  CHECK(j.find("\"version\"") != std::string::npos);
  CHECK(j.find("\"area\"") != std::string::npos);
  CHECK(slurp(dir / "reconstruct.svg").find("<svg") != std::string::npos);
}

TEST_CASE("dowker command: CSV rows and byte determinism") {
  auto cfg = parse_config_text(
      "[experiment]\ncommand = dowker\nseed = 5\n"
      "[generator]\nkind = circle\nsamples = 1024\n"
      "[body]\nkind = lens\n"
      "[dowker]\nn_min = 4\nn_max = 6\ngrid = 128\n",
      "<test>");
  const fs::path d1 = fresh_dir("dowker1"), d2 = fresh_dir("dowker2");
  cfg.out_dir = d1.string();
  CHECK(run_experiment(cfg) == 0);
  cfg.out_dir = d2.string();
  CHECK(run_experiment(cfg) == 0);
  const std::string csv = slurp(d1 / "dowker.csv");
  CHECK(csv.rfind("n,a_n,second_diff\n", 0) == 0);
  // header + rows for n = 4, 5, 6
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv == slurp(d2 / "dowker.csv"));
  CHECK(slurp(d1 / "dowker.json") == slurp(d2 / "dowker.json"));
}

TEST_CASE("refinement-demo command") {
  const fs::path dir = fresh_dir("refinement");
  auto cfg = parse_config_text(
      "[experiment]\ncommand = refinement-demo\n[refinement]\nn_max = 6\n",
      "<test>");
  cfg.out_dir = dir.string();
  CHECK(run_experiment(cfg) == 0);
  const std::string csv = slurp(dir / "refinement-demo.csv");
  CHECK(csv.find("2,0.5,inf\n") != std::string::npos);
  CHECK(csv.find("4,0.25,inf\n") != std::string::npos);
}

TEST_CASE("module errors land in the JSON error field with nonzero status") {
  const fs::path dir = fresh_dir("error");
  auto cfg = parse_config_text(
      "[experiment]\ncommand = dowker\n"
      "[generator]\nkind = circle\nsamples = 1024\n"
      "[body]\nkind = translates\ntranslates = 0,0; 5,0\n",
      "<test>");
  cfg.out_dir = dir.string();
  CHECK(run_experiment(cfg) != 0);
  CHECK(slurp(dir / "dowker.json").find("\"error\"") != std::string::npos);
}

TEST_CASE("unknown command is rejected") {
  const fs::path dir = fresh_dir("unknown");
  auto cfg = parse_config_text("[experiment]\ncommand = bogus\n", "<test>");
  cfg.out_dir = dir.string();
  CHECK(run_experiment(cfg) != 0);
}
