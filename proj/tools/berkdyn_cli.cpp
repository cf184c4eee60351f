// Command-line front end: each subcommand reads a config file, runs one
// experiment driver, and writes CSV/JSON-lines tables into --out. Output is
// byte-identical for a fixed config and seed regardless of --threads.
//
// Exit codes: 0 success, 2 configuration/parse error, 3 computation error
// (partially written tables carry a trailing "# partial:" comment).

#include <cstdio>
#include <utility>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "berkdyn/experiments.hpp"

namespace {

struct Args {
  std::string config;
  berkdyn::RunOptions opts;
};

int dispatch(const std::string& cmd, const Args& args) {
  using namespace berkdyn;
  try {
    const Config cfg = parse_config_file(args.config);
    if (cmd == "equidist")
      run_equidist(cfg, args.opts);
    else if (cmd == "condition3")
      run_condition3(cfg, args.opts);
    else if (cmd == "green")
      run_green(cfg, args.opts);
    else if (cmd == "proximity")
      run_proximity(cfg, args.opts);
    else if (cmd == "escape")
      run_escape(cfg, args.opts);
    else if (cmd == "newton")
      run_newton(cfg, args.opts);
    return 0;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "computation error: %s\n", e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Berkovich-space dynamics experiments"};
  app.require_subcommand(1);

  Args args;
  std::int64_t threads = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config, "config file (INI-style)")->required();
    sub->add_option("--out", args.opts.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override the sampling seed")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--threads", threads, "OpenMP thread count (0 = default)");
    sub->add_option("--budget", args.opts.degree_budget,
                    "degree budget for iterates (0 = config/default)");
  };

  const std::pair<const char*, const char*> subs[] = {
      {"equidist", "compare pullback root measures against a backward-sampled target"},
      {"condition3", "normalized proximity sequence at a fixed Berkovich point"},
      {"green", "dynamical Green function at configured points"},
      {"proximity", "two-map proximity at configured points"},
      {"escape", "classify orbits as bounded or escaping"},
      {"newton", "Newton polygon segments of a polynomial"},
  };
  for (const auto& [name, desc] : subs) add_common(app.add_subcommand(name, desc));

  CLI11_PARSE(app, argc, argv);

  args.opts.seed = seed;
  args.opts.has_seed = seed_set;
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(static_cast<int>(threads));
#else
  (void)threads;
#endif

  return dispatch(app.get_subcommands().front()->get_name(), args);
}
