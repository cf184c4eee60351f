// Benchmark of the pairwise-energy and potential-batch kernels: serial
// reference vs the OpenMP blocked version, with the observed numerical gap.
// The parallel pairwise sum is reproducible across thread counts (fixed block
// decomposition, partials reduced in index order), so the gap against the
// serial sum is a fixed tiny reassociation difference, not run-to-run noise.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "berkdyn/kernels.hpp"

using namespace berkdyn;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<FlatPt> random_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<FlatPt> pts(n);
  for (auto& p : pts) {
    const double ar = gauss(rng), ai = gauss(rng), br = gauss(rng), bi = gauss(rng);
    const double norm = std::sqrt(ar * ar + ai * ai + br * br + bi * bi);
    p = FlatPt{ar / norm, ai / norm, br / norm, bi / norm};
  }
  return pts;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 4096;
  if (argc > 1) n = static_cast<std::size_t>(std::strtoull(argv[1], nullptr, 10));
  const auto pts = random_points(n, 0x42);
  const std::vector<double> weights(n, 1.0 / static_cast<double>(n));

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("pairwise energy + potential batch, N = %zu, threads = %d\n\n", n, threads);
  std::printf("%-24s %12s %12s %10s %12s\n", "kernel", "serial ms", "parallel ms", "speedup",
              "max |diff|");

  {
    auto t0 = Clock::now();
    const double es = pairwise_energy_serial(pts, weights);
    const double ts = ms_since(t0);
    t0 = Clock::now();
    const double ep = pairwise_energy_parallel(pts, weights);
    const double tp = ms_since(t0);
    std::printf("%-24s %12.2f %12.2f %9.2fx %12.3e\n", "pairwise_energy", ts, tp,
                ts / (tp > 0.0 ? tp : 1e-9), std::abs(es - ep));
  }

  {
    const auto targets = random_points(256, 0x1234);
    auto t0 = Clock::now();
    const std::vector<double> out_s = potential_batch_serial(pts, weights, targets);
    const double ts = ms_since(t0);
    t0 = Clock::now();
    const std::vector<double> out_p = potential_batch_parallel(pts, weights, targets);
    const double tp = ms_since(t0);
    double md = 0.0;
    for (std::size_t i = 0; i < out_s.size(); ++i) md = std::max(md, std::abs(out_s[i] - out_p[i]));
    std::printf("%-24s %12.2f %12.2f %9.2fx %12.3e\n", "potential_batch", ts, tp,
                ts / (tp > 0.0 ? tp : 1e-9), md);
  }
  return 0;
}
