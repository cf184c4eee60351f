#pragma once

#include "berkdyn/parse.hpp"
#include "berkdyn/potential.hpp"

namespace berkdyn {

// Command-line overrides applied on top of a parsed config.
struct RunOptions {
  std::string out_dir = ".";
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::int64_t threads = 0;        // <= 0: leave the OpenMP default
  std::int64_t degree_budget = 0;  // <= 0: config value or the library default
};

// Shared config plumbing.
Backend backend_from_config(const Config& cfg);
std::vector<BerkPoint> points_from_config(const Config& cfg, const Backend& be);
std::vector<std::int64_t> int_list(const std::string& text);

// The 64-point archimedean test fixture used by the measure-comparison
// experiments: 24 angles on each of the radii 0.999 and 1.001, plus 4 angles
// on each of 0.1, 0.3, 2.0, 5.0.
std::vector<BerkPoint> standard_test_points(const Backend& be);

// Experiment drivers. Each writes CSV (and JSON-lines where noted) into
// opts.out_dir with deterministic contents for a fixed config and seed, and
// throws on error after flagging any partially written file with a trailing
// "# partial: ..." comment line. Row order is canonical: point index first,
// then n.
void run_equidist(const Config& cfg, const RunOptions& opts);
void run_condition3(const Config& cfg, const RunOptions& opts);
void run_green(const Config& cfg, const RunOptions& opts);
void run_proximity(const Config& cfg, const RunOptions& opts);
void run_escape(const Config& cfg, const RunOptions& opts);
void run_newton(const Config& cfg, const RunOptions& opts);

}  // namespace berkdyn
