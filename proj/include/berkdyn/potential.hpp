#pragma once

#include "berkdyn/kernels.hpp"
#include "berkdyn/measures.hpp"

namespace berkdyn {

// A logarithmic quantity together with a certified error radius. Values over
// the non-archimedean backends are exact (radius 0); over C the radius covers
// the truncation of the defining series, not floating-point rounding.
// `neg_infinite` marks exact -infinity (kernel at coinciding classical
// points); log_value is -inf there and error_radius meaningless.
struct KernelValue {
  double log_value = 0.0;
  double error_radius = 0.0;
  bool neg_infinite = false;
};

struct GreenConfig {
  std::int64_t iterations = 40;
  std::int64_t degree_budget = kDefaultDegreeBudget;
};

// One escape-rate step log ||F(p)|| - d log ||p||: at classical points the
// norm of the lift at the stored unit representative (Euclidean over C, sup
// otherwise); at disk points the Gauss-seminorm analogue
// log max(|F0|_S, |F1|_S) - d log max(1, |S|).
double t_step(const RationalMap& f, const BerkPoint& s);
// Same in vlog units (non-archimedean backends only).
double t_step_vlog(const RationalMap& f, const BerkPoint& s);

// sup |t_step| bound used for the green tail: coefficient/resultant bounds
// over C, the resultant valuation otherwise (0 exactly under good reduction).
double t_sup_bound(const RationalMap& f);

// Dynamical Green function of the stored normalized lift:
//   g(S) = sum_{k<n} d^{-k-1} t_step(f, f^k(S)),
// orbit advanced by evaluate at classical points and disk_image at disks.
// error_radius = t_sup_bound / ((d-1) d^n) certifies the truncation. Add
// RationalMap::input_green_offset() to translate to an unnormalized input
// lift.
KernelValue green(const RationalMap& f, const BerkPoint& s, const GreenConfig& cfg = {});

// Normalized kernel log [S,T] - g(S) - g(T): the potential-theoretic kernel
// whose equilibrium energy is V_F.
KernelValue phi_kernel(const RationalMap& f, const BerkPoint& s, const BerkPoint& t,
                       const GreenConfig& cfg = {});

// integral of phi_kernel(s, .) against mu; -infinity marker when s coincides
// with a classical atom.
KernelValue potential(const RationalMap& f, const DiscreteMeasure& mu, const BerkPoint& s,
                      const GreenConfig& cfg = {});

// Double integral of phi_kernel against mu x mu with the classical diagonal
// excluded; non-classical atoms keep their (finite) diagonal term
// w^2 (log diam - 2g).
KernelValue energy(const RationalMap& f, const DiscreteMeasure& mu, const GreenConfig& cfg = {});

struct VEstimate {
  KernelValue energy;
  // sup over atoms of |leave-one-out potential - energy|: how far the sample
  // is from the Frostman equality on its own support.
  double diagnostic_sup = 0.0;
};

// Estimate of the equilibrium constant V_F from a sample of mu_f, with the
// self-consistency diagnostic. The weighted mean of the leave-one-out
// potentials reproduces the off-diagonal energy identically.
VEstimate v_estimate(const RationalMap& f, const DiscreteMeasure& mu,
                     const GreenConfig& cfg = {});

// Proximity function log [f, a]_can at S: at classical points the chordal
// distance of the images; at disk points the Gauss-seminorm route
//   |wedge(f,a)|_S / prod_i max(|F_i0|_S, |F_i1|_S)
// in log form. DomainError when f and a coincide as maps (zero wedge).
KernelValue proximity(const RationalMap& f, const RationalMap& a, const BerkPoint& s);
// vlog-unit version (non-archimedean backends), exact in the value group.
double proximity_vlog(const RationalMap& f, const RationalMap& a, const BerkPoint& s);

// Root-factorized evaluation of the same quantity at a complex classical
// point: factor the wedge form through its projective roots (polyroots) and
// sum chordal logs against the root points. Agrees with `proximity` to
// root-finder accuracy; exercised as the second route in tests.
double proximity_factor_route(const RationalMap& f, const RationalMap& a,
                              const ProjectivePoint& z, std::uint64_t root_seed = 0x5eedULL);

// The naive composition [f(S), a(S)] of the Hsia kernel with the two maps
// (disk images, then the kernel). Differs from `proximity` off the classical
// points; kept as the contrast diagnostic.
KernelValue naive_pointwise_proximity(const RationalMap& f, const RationalMap& a,
                                      const BerkPoint& s);

// proximity(f^n, a, S) - g_f(f^n(S)) - g_f(a(S)) with g_f = g + v_f/2.
KernelValue weighted_proximity(const RationalMap& f, const RationalMap& a, const BerkPoint& s,
                               std::int64_t n, const GreenConfig& cfg = {}, double v_f = 0.0);

struct Condition3Value {
  std::int64_t n = 0;
  double value = 0.0;  // d^{-n} proximity(f^n, a, S)
  // Non-archimedean backends: value / log p, computed by dividing in vlog
  // units so exact integer results stay exact. NaN over C.
  double vlog_over_log_p = 0.0;
  bool neg_infinite = false;
};

// The normalized proximity sequence d^{-n} log [f^n, a]_can (S) along a list
// of iterate counts.
std::vector<Condition3Value> condition3_sequence(const RationalMap& f, const RationalMap& a,
                                                 const BerkPoint& s,
                                                 const std::vector<std::int64_t>& ns,
                                                 std::int64_t degree_budget = kDefaultDegreeBudget);

struct ValironValue {
  double value = 0.0;  // d^{-n} mu-average of proximity(f^n, a, .)
  double error_radius = 0.0;
  std::int64_t excluded_atoms = 0;  // atoms where the proximity is -infinity
  bool defined = true;              // false when every atom was excluded
};

// d^{-n} times the mu-average of the proximity of f^n to a; -infinity atoms
// are dropped and the average renormalized over the surviving weight.
ValironValue valiron_integral(const RationalMap& f, const RationalMap& a,
                              const DiscreteMeasure& mu, std::int64_t n,
                              const GreenConfig& cfg = {});

struct CompareConfig {
  GreenConfig green;
  double collision_tol = 1e-9;
  std::vector<std::pair<double, double>> annuli = {{0.9, 1.1}};
};

struct AnnulusRow {
  double lo = 0.0, hi = 0.0;
  Rat nu_mass, mu_mass;
};

struct CompareReport {
  double sup_diff = 0.0;
  double mean_diff = 0.0;
  // Aligned with the test-point list; NaN at skipped (colliding) points.
  std::vector<double> point_diffs;
  std::int64_t skipped = 0;
  std::vector<AnnulusRow> annuli;
};

// Potential-discrepancy report between two measures for the same map:
// sup/mean over test points of |potential(nu,.) - potential(mu,.)|, plus
// mass-in-annulus summaries. Complex backend; points colliding with an atom
// of either measure are skipped and logged.
CompareReport compare_measures(const DiscreteMeasure& nu, const DiscreteMeasure& mu,
                               const RationalMap& f, const std::vector<BerkPoint>& test_points,
                               const CompareConfig& cfg = {});

// Mass of the classical atoms with lo <= |z| < hi.
Rat annulus_mass(const DiscreteMeasure& m, double lo, double hi);

}  // namespace berkdyn
