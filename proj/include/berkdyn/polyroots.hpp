#pragma once

#include "berkdyn/newton.hpp"

namespace berkdyn {

struct RootCluster {
  std::complex<double> value{0.0, 0.0};
  std::int64_t multiplicity = 1;
};

struct ComplexRoots {
  // Finite roots after cluster merging, sorted by (re, im).
  std::vector<RootCluster> finite;
  // formal_degree - effective degree (leading coefficients below the
  // degree-drop tolerance are folded in here).
  std::int64_t infinity_multiplicity = 0;
};

// All roots of a complex-backend polynomial via Aberth-Ehrlich iteration
// from a deterministically perturbed circle. Clusters are merged at relative
// distance 1e-8 and every cluster representative is certified by the
// residual bound |w(r)| <= 1e-10 * max|coeff| * max(1, |r|)^deg; failure to
// converge or certify throws ComputationError. Evaluation switches to the
// reversed polynomial outside the unit disk, so large roots are handled
// without overflow. `parallel` runs the Jacobi sweeps across threads with
// identical results.
ComplexRoots complex_roots(const Poly& w, std::int64_t formal_degree = -1,
                           std::uint64_t seed = 0x5eedULL, bool parallel = false);

struct PadicRoots {
  // Base-field roots certified by Hensel lifting (simple residue direction),
  // each of multiplicity 1, sorted by (valuation, unit representation).
  std::vector<Scalar> simple_roots;
  std::int64_t zero_multiplicity = 0;
  std::int64_t infinity_multiplicity = 0;
  // Root mass (with multiplicity) neither certified inside the base field
  // nor located at 0/infinity: non-integral valuations and repeated residue
  // directions.
  std::int64_t unresolved_mass = 0;
  bool complete() const { return unresolved_mass == 0; }
};

// Base-field roots of a non-archimedean polynomial: integer-slope Newton
// segments give candidate valuations; at each, simple roots of the residue
// polynomial are lifted by Newton iteration to the working precision.
PadicRoots nonarch_roots(const Poly& w, std::int64_t formal_degree = -1);

struct HenselRoots {
  std::vector<Scalar> roots;
  // False when a residue root is repeated (those directions are omitted) or
  // when roots of negative valuation exist (reduction degree drop).
  bool complete = true;
};

// Simple-residue-root extraction: normalize to integral coefficients, reduce
// mod the maximal ideal, exhaust residue roots over F_p, and Newton-lift each
// simple one (reduced derivative a unit) to the working precision. Repeated
// residue roots are omitted and clear the completeness flag.
HenselRoots hensel_simple_roots(const Poly& w);

}  // namespace berkdyn
