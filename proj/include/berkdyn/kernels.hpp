#pragma once

#include <cstdint>
#include <vector>

#include "berkdyn/projective.hpp"

namespace berkdyn {

// Flattened unit-norm representative of a complex projective point, laid out
// for tight pairwise loops: p = (ar + i*ai : br + i*bi) with
// ar^2 + ai^2 + br^2 + bi^2 = 1. For unit representatives
// log|p ^ q| = log of the chordal distance.
struct FlatPt {
  double ar = 0.0, ai = 0.0, br = 0.0, bi = 0.0;
};

FlatPt flatten(const ProjectivePoint& p);
std::vector<FlatPt> flatten(const std::vector<ProjectivePoint>& pts);

// log |p0 q1 - p1 q0|; -infinity at coincidence.
double log_wedge_abs(const FlatPt& p, const FlatPt& q);

// sum_{i<j} w_i w_j log|p_i ^ p_j| over unordered pairs. The serial and
// parallel routes accumulate in different orders, so they agree only to
// rounding (~1e-12 relative); the parallel route itself is bitwise
// reproducible for any thread count because each fixed 256-row block is
// reduced in index order and the block partials are summed in block order.
double pairwise_energy_serial(const std::vector<FlatPt>& pts,
                              const std::vector<double>& weights);
double pairwise_energy_parallel(const std::vector<FlatPt>& pts,
                                const std::vector<double>& weights);

// out[t] = sum_i w_i log|p_i ^ q_t|. The parallel route distributes targets
// across threads; per-target accumulation order matches the serial route, so
// the two agree bitwise.
std::vector<double> potential_batch_serial(const std::vector<FlatPt>& pts,
                                           const std::vector<double>& weights,
                                           const std::vector<FlatPt>& targets);
std::vector<double> potential_batch_parallel(const std::vector<FlatPt>& pts,
                                             const std::vector<double>& weights,
                                             const std::vector<FlatPt>& targets);

}  // namespace berkdyn
