#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "berkdyn/experiments.hpp"

using namespace berkdyn;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& tag) {
  const fs::path p = fs::path("/tmp") / ("berkdyn_exp_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

std::string slurp(const std::string& dir, const std::string& name) {
  std::ifstream in(fs::path(dir) / name, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

RunOptions opts_for(const std::string& dir) {
  RunOptions o;
  o.out_dir = dir;
  return o;
}

}  // namespace

TEST_CASE("green task output") {
  const std::string dir = fresh_dir("green");
  const Config cfg = parse_config_text(
      "[backend]\nkind = complex\n[map]\nf = z^2\n[points]\nlist = 0;2\n");
  run_green(cfg, opts_for(dir));
  const std::string csv = slurp(dir, "run_green.csv");
  CHECK(line_count(csv) == 3);
  CHECK(contains(csv, "point_index,point,green,error_radius,input_offset"));
  // The fixed point at the origin has green exactly 0 and offset 0.
  CHECK(contains(csv, "0,pt(0+0i),0,"));

  // Reruns are byte identical.
  const std::string dir2 = fresh_dir("green2");
  run_green(cfg, opts_for(dir2));
  CHECK(slurp(dir2, "run_green.csv") == csv);
}

TEST_CASE("condition3 task is exact in the value group") {
  const std::string dir = fresh_dir("cond3");
  const Config cfg = parse_config_text(
      "[backend]\nkind = laurent\np = 2\n[map]\nf = z+z^2\na = Id\n"
      "[points]\nlist = disk(0,-1)\n[condition3]\nn = 1,2\n");
  run_condition3(cfg, opts_for(dir));
  const std::string csv = slurp(dir, "run_condition3.csv");
  CHECK(line_count(csv) == 3);
  CHECK(contains(csv, "point_index,point,n,value,vlog_over_log_p,neg_infinite"));
  CHECK(contains(csv, "\"disk(0,-1)\""));
  // Both iterate counts give vlog/log p = -1 exactly.
  std::size_t hits = 0, pos = 0;
  while ((pos = csv.find(",-1,0\n", pos)) != std::string::npos) {
    ++hits;
    pos += 5;
  }
  CHECK(hits == 2);
}

TEST_CASE("equidistribution task over C") {
  const std::string dir = fresh_dir("equi_c");
  const Config cfg = parse_config_text(
      "[backend]\nkind = complex\n[map]\nf = z^2\na = 1\n"
      "[equidist]\nn = 2,3\ndepth = 4\ncap = 16\nseed_point = 2\n");
  run_equidist(cfg, opts_for(dir));

  const std::string compare = slurp(dir, "run_compare.csv");
  CHECK(line_count(compare) == 3);
  CHECK(contains(compare, "n,sup_diff,mean_diff,skipped,nu_atoms,mu_atoms"));
  CHECK(contains(compare, "\n2,"));
  CHECK(contains(compare, ",4,16\n"));  // nu has 4 atoms at n=2, mu 16
  CHECK(contains(compare, ",8,16\n"));

  const std::string annuli = slurp(dir, "run_annuli.csv");
  CHECK(line_count(annuli) == 3);
  CHECK(contains(annuli, "n,lo,hi,nu_mass,mu_mass"));
  CHECK(contains(annuli, "1,1\n"));  // both measures sit on the unit shell

  const std::string points = slurp(dir, "run_points.csv");
  CHECK(line_count(points) == 1 + 2 * 64);

  const std::string measures = slurp(dir, "run_measures.jsonl");
  CHECK(line_count(measures) == 16 + 4 + 8);
  CHECK(contains(measures, "{\"measure\":\"mu\",\"point\":"));
  CHECK(contains(measures, "{\"measure\":\"nu\",\"n\":2,"));
  CHECK(contains(measures, "\"weight\":\"1/16\""));
}

TEST_CASE("equidistribution task over Q_p") {
  const std::string dir = fresh_dir("equi_p");
  const Config cfg = parse_config_text(
      "[backend]\nkind = padic\np = 5\n[map]\nf = z^2\na = 1\n[equidist]\nn = 1,2\n");
  run_equidist(cfg, opts_for(dir));

  const std::string profile = slurp(dir, "run_profile.csv");
  CHECK(line_count(profile) == 3);
  CHECK(contains(profile, "n,total_count,max_direction_mass,off_unit_mass"));
  CHECK(contains(profile, "\n1,2,"));
  CHECK(contains(profile, "\n2,4,"));

  const std::string jl = slurp(dir, "run_profiles.jsonl");
  CHECK(line_count(jl) == 2);
  CHECK(contains(jl, "\"n\":1"));
  CHECK(contains(jl, "\"max_direction_mass\""));
  CHECK(contains(jl, "\"directions\""));
}

TEST_CASE("newton polygon task") {
  const std::string dir = fresh_dir("newton");
  const Config cfg = parse_config_text(
      "[backend]\nkind = padic\np = 5\n[newton]\npoly = [5,-6,1]\n");
  run_newton(cfg, opts_for(dir));
  const std::string csv = slurp(dir, "run_newton.csv");
  CHECK(line_count(csv) == 3);
  CHECK(contains(csv, "kind,k_start,k_end,slope,root_valuation,length"));
  // Roots 1 and 5: one segment of root valuation 1, one of valuation 0.
  CHECK(contains(csv, "segment,0,1,"));
  CHECK(contains(csv, "segment,1,2,"));
  CHECK(contains(csv, ",1,1\n"));
  CHECK(contains(csv, ",0,1\n"));
  CHECK(!contains(csv, "zero,"));
  CHECK(!contains(csv, "infinity,"));
}

TEST_CASE("escape task over C") {
  const std::string dir = fresh_dir("escape_c");
  const Config cfg = parse_config_text(
      "[backend]\nkind = complex\n[map]\nf = z^2\n[points]\nlist = 3;1/2;inf\n");
  run_escape(cfg, opts_for(dir));
  const std::string csv = slurp(dir, "run_escape.csv");
  CHECK(line_count(csv) == 4);
  CHECK(contains(csv, "point_index,point,status,n_escape,final_abs_log"));
  CHECK(contains(csv, "0,pt(3+0i),escaped,0,"));
  CHECK(contains(csv, ",bounded,-1,"));
  CHECK(contains(csv, "2,inf,escaped,0,"));
}

TEST_CASE("escape task over Q_p") {
  const std::string dir = fresh_dir("escape_p");
  const Config cfg = parse_config_text(
      "[backend]\nkind = padic\np = 5\n[map]\nf = z^2/5\n[points]\nlist = 1\n");
  run_escape(cfg, opts_for(dir));
  const std::string csv = slurp(dir, "run_escape.csv");
  CHECK(contains(csv, ",escaped,1,"));

  const Config bad = parse_config_text(
      "[backend]\nkind = padic\np = 5\n[map]\nf = (z^2+1)/z\n[points]\nlist = 1\n");
  const std::string dir2 = fresh_dir("escape_bad");
  CHECK_THROWS_AS(run_escape(bad, opts_for(dir2)), ParseError);
}

TEST_CASE("failed tasks leave a partial marker") {
  // The numerator of z^2 - 1 cancels fully at z = 1 inside the 5-adic
  // window, so that task exhausts precision while z = 3 completes normally.
  const std::string dir = fresh_dir("partial");
  const Config cfg = parse_config_text(
      "[backend]\nkind = padic\np = 5\n[map]\nf = z^2-1\n[points]\nlist = 3;1\n");
  CHECK_THROWS_AS(run_green(cfg, opts_for(dir)), ComputationError);
  const std::string csv = slurp(dir, "run_green.csv");
  CHECK(contains(csv, "# partial:"));
}
