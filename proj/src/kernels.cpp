#include "berkdyn/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace berkdyn {

namespace {
constexpr std::int64_t kBlock = 256;
}  // namespace

FlatPt flatten(const ProjectivePoint& p) {
  if (!p.backend().archimedean()) throw BackendMismatch("flatten: complex backend required");
  const std::complex<double> a = p.c0().complex_val();
  const std::complex<double> b = p.c1().complex_val();
  return FlatPt{a.real(), a.imag(), b.real(), b.imag()};
}

std::vector<FlatPt> flatten(const std::vector<ProjectivePoint>& pts) {
  std::vector<FlatPt> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(flatten(p));
  return out;
}

double log_wedge_abs(const FlatPt& p, const FlatPt& q) {
  const double wr = p.ar * q.br - p.ai * q.bi - (p.br * q.ar - p.bi * q.ai);
  const double wi = p.ar * q.bi + p.ai * q.br - (p.br * q.ai + p.bi * q.ar);
  return 0.5 * std::log(wr * wr + wi * wi);
}

static double block_partial(const std::vector<FlatPt>& pts,
                            const std::vector<double>& weights,
                            std::int64_t i_begin, std::int64_t i_end) {
  double acc = 0.0;
  for (std::int64_t i = i_begin; i < i_end; ++i) {
    double row = 0.0;
    for (std::int64_t j = 0; j < i; ++j) {
      row += weights[static_cast<std::size_t>(j)] *
             log_wedge_abs(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
    }
    acc += weights[static_cast<std::size_t>(i)] * row;
  }
  return acc;
}

double pairwise_energy_serial(const std::vector<FlatPt>& pts,
                              const std::vector<double>& weights) {
  if (pts.size() != weights.size()) throw DomainError("pairwise_energy: size mismatch");
  const auto n = static_cast<std::int64_t>(pts.size());
  double acc = 0.0;
  for (std::int64_t i = 1; i < n; ++i) {
    double row = 0.0;
    for (std::int64_t j = 0; j < i; ++j) {
      row += weights[static_cast<std::size_t>(j)] *
             log_wedge_abs(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
    }
    acc += weights[static_cast<std::size_t>(i)] * row;
  }
  return acc;
}

double pairwise_energy_parallel(const std::vector<FlatPt>& pts,
                                const std::vector<double>& weights) {
  if (pts.size() != weights.size()) throw DomainError("pairwise_energy: size mismatch");
  const auto n = static_cast<std::int64_t>(pts.size());
  const std::int64_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::int64_t lo = b * kBlock;
    const std::int64_t hi = std::min(n, lo + kBlock);
    partial[static_cast<std::size_t>(b)] = block_partial(pts, weights, lo, hi);
  }
  double acc = 0.0;
  for (std::int64_t b = 0; b < nblocks; ++b) acc += partial[static_cast<std::size_t>(b)];
  return acc;
}

static std::vector<double> potential_batch_impl(const std::vector<FlatPt>& pts,
                                                const std::vector<double>& weights,
                                                const std::vector<FlatPt>& targets,
                                                bool parallel) {
  if (pts.size() != weights.size()) throw DomainError("potential_batch: size mismatch");
  const auto nt = static_cast<std::int64_t>(targets.size());
  std::vector<double> out(static_cast<std::size_t>(nt), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
#else
  (void)parallel;
#endif
  for (std::int64_t t = 0; t < nt; ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      acc += weights[i] * log_wedge_abs(pts[i], targets[static_cast<std::size_t>(t)]);
    }
    out[static_cast<std::size_t>(t)] = acc;
  }
  return out;
}

std::vector<double> potential_batch_serial(const std::vector<FlatPt>& pts,
                                           const std::vector<double>& weights,
                                           const std::vector<FlatPt>& targets) {
  return potential_batch_impl(pts, weights, targets, false);
}

std::vector<double> potential_batch_parallel(const std::vector<FlatPt>& pts,
                                             const std::vector<double>& weights,
                                             const std::vector<FlatPt>& targets) {
  return potential_batch_impl(pts, weights, targets, true);
}

}  // namespace berkdyn
