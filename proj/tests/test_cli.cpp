#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(BERKDYN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  REQUIRE(st != -1);
  return WIFEXITED(st) ? WEXITSTATUS(st) : -2;
}

std::string write_cfg(const std::string& name, const std::string& text) {
  const std::string path = "/tmp/" + name;
  std::ofstream out(path);
  out << text;
  return path;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fresh_dir(const std::string& tag) {
  const fs::path p = fs::path("/tmp") / ("berkdyn_cli_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

}  // namespace

TEST_CASE("green subcommand writes its table") {
  const std::string cfg = write_cfg(
      "cli_green.ini", "[backend]\nkind = complex\n[map]\nf = z^2\n[points]\nlist = 0;1;2\n");
  const std::string dir = fresh_dir("green");
  CHECK(run("green --config " + cfg + " --out " + dir) == 0);
  CHECK(fs::exists(fs::path(dir) / "run_green.csv"));
}

TEST_CASE("missing config file exits with the usage code") {
  CHECK(run("green --config /tmp/berkdyn_no_such_file.ini") == 2);
}

TEST_CASE("backend mismatch exits with the usage code") {
  const std::string cfg = write_cfg(
      "cli_newton_c.ini", "[backend]\nkind = complex\n[newton]\npoly = [1,1]\n");
  const std::string dir = fresh_dir("newton");
  CHECK(run("newton --config " + cfg + " --out " + dir) == 2);
}

TEST_CASE("computation failures exit with the error code") {
  const std::string cfg = write_cfg(
      "cli_deg1.ini", "[backend]\nkind = complex\n[map]\nf = z\n[points]\nlist = 0\n");
  const std::string dir = fresh_dir("deg1");
  CHECK(run("green --config " + cfg + " --out " + dir) == 3);
}

TEST_CASE("equidist reruns with a pinned seed are byte identical") {
  const std::string cfg = write_cfg("cli_equi.ini",
                                    "[backend]\nkind = complex\n[map]\nf = z^2\na = 1\n"
                                    "[equidist]\nn = 2,3\ndepth = 5\ncap = 16\nseed_point = 2\n");
  const std::string d1 = fresh_dir("equi1");
  const std::string d2 = fresh_dir("equi2");
  CHECK(run("equidist --config " + cfg + " --out " + d1 + " --seed 7") == 0);
  CHECK(run("equidist --config " + cfg + " --out " + d2 + " --seed 7") == 0);
  for (const char* name : {"run_compare.csv", "run_annuli.csv", "run_points.csv",
                           "run_measures.jsonl"}) {
    CHECK(slurp(fs::path(d1) / name) == slurp(fs::path(d2) / name));
  }

  // A different seed moves the capped sample.
  const std::string d3 = fresh_dir("equi3");
  CHECK(run("equidist --config " + cfg + " --out " + d3 + " --seed 8") == 0);
  CHECK(slurp(fs::path(d1) / "run_measures.jsonl") != slurp(fs::path(d3) / "run_measures.jsonl"));
}
