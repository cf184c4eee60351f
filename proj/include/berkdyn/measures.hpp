#pragma once

#include "berkdyn/ffpoly.hpp"
#include "berkdyn/polyroots.hpp"
#include "berkdyn/rational_map.hpp"

namespace berkdyn {

struct WeightedAtom {
  BerkPoint point;
  Rat weight;  // positive
};

// Finitely supported positive measure; weights are exact rationals so mass
// accounting never drifts.
class DiscreteMeasure {
 public:
  DiscreteMeasure(Backend be, std::vector<WeightedAtom> atoms);
  static DiscreteMeasure dirac(const BerkPoint& at);

  const Backend& backend() const { return be_; }
  const std::vector<WeightedAtom>& atoms() const { return atoms_; }
  Rat total_mass() const;
  bool is_probability() const { return total_mass() == Rat(1); }

 private:
  Backend be_;
  std::vector<WeightedAtom> atoms_;
};

// One histogram bar of a skeleton profile: the mass of roots at a given
// valuation, with markers for the root at 0 (valuation +infinity) and the
// root at infinity (valuation -infinity).
struct ValuationMass {
  enum class Kind : std::uint8_t { Finite, AtZero, AtInfinity };
  Kind kind = Kind::Finite;
  Rat valuation;  // meaningful for Finite only
  Rat mass;
};

// Valuation-0 roots grouped by residue class: one entry per (irreducible
// residue factor degree, multiplicity) pair. An irreducible factor of degree
// e covers e conjugate residue directions, each holding one root of the
// class's multiplicity; `direction_count` is the number of factors in the
// class, so the class spans direction_count * factor_degree directions.
struct DirectionClass {
  std::int64_t factor_degree = 1;
  std::int64_t multiplicity = 1;
  std::int64_t direction_count = 1;
  Rat mass_per_direction;  // multiplicity / total root count
  Rat class_mass() const { return mass_per_direction * Rat(direction_count * factor_degree); }
};

// Summary of a non-archimedean root measure as seen from the Gauss point:
// valuation histogram plus residue-direction masses for the valuation-0
// shell. Masses sum to 1 exactly.
struct SkeletonProfile {
  std::int64_t total_count = 0;  // roots with multiplicity (= d^n + deg a)
  std::vector<ValuationMass> histogram;
  std::vector<DirectionClass> directions;
  // Largest mass in a single direction at the Gauss point: the 0-direction
  // (all positive valuations), the infinity-direction (all negative), or one
  // residue direction.
  Rat max_direction_mass;
  // Mass off the unit shell (valuation != 0, markers included).
  Rat nonzero_valuation_mass() const;
};

// Roots of f^n = a over C as a probability measure: every root of the wedge
// form weighted by multiplicity/(d^n + deg a), the infinity atom carrying the
// homogeneous degree drop.
DiscreteMeasure nu_measure_complex(const RationalMap& f, const RationalMap& a, std::int64_t n,
                                   std::int64_t degree_budget = kDefaultDegreeBudget);

// Non-archimedean counterpart: the roots are summarized by Newton-polygon
// valuations and residue-field factorization instead of being enumerated.
SkeletonProfile nu_profile(const RationalMap& f, const RationalMap& a, std::int64_t n,
                           std::int64_t degree_budget = kDefaultDegreeBudget);

struct MuSampleOptions {
  std::int64_t depth = 10;
  std::int64_t cap = 4096;
  std::uint64_t rng_seed = 1;
  std::int64_t degree_budget = kDefaultDegreeBudget;
};

// Backward-iteration sample of the equilibrium measure, rooted at a
// non-exceptional classical seed. The full preimage tree is kept while
// d^depth <= cap; otherwise each level is resampled down to `cap` atoms with
// uniform weights (deterministic in rng_seed). Non-archimedean maps are
// served by the good-reduction shortcut (exactly the Gauss Dirac mass);
// anything else is out of scope here.
DiscreteMeasure mu_sample(const RationalMap& f, const ProjectivePoint& seed,
                          const MuSampleOptions& opts = {});

}  // namespace berkdyn
