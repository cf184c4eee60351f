#include "berkdyn/measures.hpp"

#include <algorithm>
#include <cmath>

namespace berkdyn {

DiscreteMeasure::DiscreteMeasure(Backend be, std::vector<WeightedAtom> atoms)
    : be_(be), atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    if (!(a.weight > Rat(0))) throw DomainError("DiscreteMeasure: weights must be positive");
    if (!(a.point.backend() == be_)) throw BackendMismatch("DiscreteMeasure: mixed backends");
  }
}

DiscreteMeasure DiscreteMeasure::dirac(const BerkPoint& at) {
  return DiscreteMeasure(at.backend(), {WeightedAtom{at, Rat(1)}});
}

Rat DiscreteMeasure::total_mass() const {
  Rat m(0);
  for (const auto& a : atoms_) m = m + a.weight;
  return m;
}

Rat SkeletonProfile::nonzero_valuation_mass() const {
  Rat m(0);
  for (const auto& h : histogram) {
    if (h.kind != ValuationMass::Kind::Finite || !(h.valuation == Rat(0))) m = m + h.mass;
  }
  return m;
}

DiscreteMeasure nu_measure_complex(const RationalMap& f, const RationalMap& a, std::int64_t n,
                                   std::int64_t degree_budget) {
  const Backend& be = f.backend();
  if (!be.archimedean()) throw BackendMismatch("nu_measure_complex: complex backend required");
  const RationalMap fn = f.iterate(n, degree_budget);
  const HomogeneousForm w = wedge_form(fn, a);
  const std::int64_t D = w.formal_degree();
  const ComplexRoots roots = complex_roots(w.dehomogenized(), D);

  std::vector<WeightedAtom> atoms;
  std::int64_t seen = 0;
  for (const auto& rc : roots.finite) {
    atoms.push_back(WeightedAtom{
        BerkPoint::classical(ProjectivePoint::from_affine(Scalar::complex_value(rc.value))),
        Rat(rc.multiplicity, D)});
    seen += rc.multiplicity;
  }
  if (roots.infinity_multiplicity > 0) {
    atoms.push_back(
        WeightedAtom{BerkPoint::infinity(be), Rat(roots.infinity_multiplicity, D)});
    seen += roots.infinity_multiplicity;
  }
  if (seen != D) throw ComputationError("nu_measure_complex: root count mismatch");
  return DiscreteMeasure(be, std::move(atoms));
}

SkeletonProfile nu_profile(const RationalMap& f, const RationalMap& a, std::int64_t n,
                           std::int64_t degree_budget) {
  const Backend& be = f.backend();
  if (be.archimedean()) throw BackendMismatch("nu_profile: non-archimedean backend required");
  const RationalMap fn = f.iterate(n, degree_budget);
  const HomogeneousForm w = wedge_form(fn, a);
  const std::int64_t D = w.formal_degree();
  const NewtonPolygon np = newton_polygon(w.dehomogenized(), D);

  SkeletonProfile out;
  out.total_count = D;
  if (np.zero_multiplicity > 0) {
    out.histogram.push_back(
        ValuationMass{ValuationMass::Kind::AtZero, Rat(0), Rat(np.zero_multiplicity, D)});
  }
  for (const auto& seg : np.segments) {
    out.histogram.push_back(
        ValuationMass{ValuationMass::Kind::Finite, seg.root_valuation, Rat(seg.length(), D)});
  }
  if (np.infinity_multiplicity > 0) {
    out.histogram.push_back(ValuationMass{ValuationMass::Kind::AtInfinity, Rat(0),
                                          Rat(np.infinity_multiplicity, D)});
  }

  // Residue factorization of the valuation-0 shell: the sub-polynomial on the
  // slope-0 plateau, divided by its uniformizer content, reduced mod the
  // maximal ideal.
  Rat mass_zero_dir(np.zero_multiplicity, D);
  Rat mass_inf_dir(np.infinity_multiplicity, D);
  Rat max_dir(0);
  for (const auto& seg : np.segments) {
    if (seg.root_valuation > Rat(0)) mass_zero_dir = mass_zero_dir + Rat(seg.length(), D);
    if (seg.root_valuation < Rat(0)) mass_inf_dir = mass_inf_dir + Rat(seg.length(), D);
    if (!(seg.root_valuation == Rat(0))) continue;

    const std::int64_t v0 = polygon_height(np, seg.k_start).num();
    const Scalar pi = Scalar::uniformizer(be);
    const Poly& wd = w.dehomogenized();
    std::vector<std::int32_t> rc(static_cast<std::size_t>(seg.length()) + 1, 0);
    for (std::int64_t j = 0; j <= seg.length(); ++j) {
      const Scalar ck = wd.coeff(seg.k_start + j);
      if (ck.is_zero()) continue;
      if (ck.is_indeterminate()) {
        if (ck.abs_floor() <= v0)
          throw PrecisionExhausted("nu_profile: residue shell not determined");
        continue;
      }
      if (ck.valuation() > v0) continue;
      const auto r = residue(ck / pi.pow(v0));
      if (!r) throw ComputationError("nu_profile: residue extraction failed");
      rc[static_cast<std::size_t>(j)] = *r;
    }
    const FFPoly shell(static_cast<std::int32_t>(be.p), std::move(rc));
    for (const auto& sf : squarefree_decomposition(shell)) {
      for (const auto& blk : distinct_degree_factorization(sf.factor)) {
        DirectionClass dc;
        dc.factor_degree = blk.degree;
        dc.multiplicity = sf.multiplicity;
        dc.direction_count = blk.count;
        dc.mass_per_direction = Rat(sf.multiplicity, D);
        out.directions.push_back(dc);
      }
    }
  }
  std::sort(out.directions.begin(), out.directions.end(),
            [](const DirectionClass& x, const DirectionClass& y) {
              if (x.factor_degree != y.factor_degree) return x.factor_degree < y.factor_degree;
              return x.multiplicity < y.multiplicity;
            });

  max_dir = std::max(mass_zero_dir, mass_inf_dir);
  for (const auto& dc : out.directions) max_dir = std::max(max_dir, dc.mass_per_direction);
  out.max_direction_mass = max_dir;

  Rat total(0);
  for (const auto& h : out.histogram) total = total + h.mass;
  if (!(total == Rat(1))) throw ComputationError("nu_profile: masses do not sum to 1");
  return out;
}

namespace {

bool seed_is_exceptional(const RationalMap& f, const ProjectivePoint& seed) {
  const ExceptionalSet es = exceptional_set(f);
  for (const auto& cyc : es.cycles) {
    for (const auto& pt : cyc) {
      if (chordal(seed, pt) <= 1e-8) return true;
    }
  }
  return false;
}

struct LevelAtom {
  ProjectivePoint point;
  Rat weight;
};

// All preimages of `target` under f, each with multiplicity: the roots of
// wedge(f, const target).
std::vector<std::pair<ProjectivePoint, std::int64_t>> preimages(const RationalMap& f,
                                                                const ProjectivePoint& target,
                                                                std::uint64_t seed) {
  const HomogeneousForm w = wedge_form(f, RationalMap::constant(target));
  const ComplexRoots roots = complex_roots(w.dehomogenized(), w.formal_degree(), seed);
  std::vector<std::pair<ProjectivePoint, std::int64_t>> out;
  for (const auto& rc : roots.finite) {
    out.emplace_back(
        ProjectivePoint::from_affine(Scalar::complex_value(rc.value)),
        rc.multiplicity);
  }
  if (roots.infinity_multiplicity > 0)
    out.emplace_back(ProjectivePoint::infinity(f.backend()), roots.infinity_multiplicity);
  return out;
}

std::pair<double, double> atom_sort_key(const ProjectivePoint& p) {
  if (p.is_infinity()) return {kPosInf, 0.0};
  const auto z = p.affine().complex_val();
  return {z.real(), z.imag()};
}

}  // namespace

DiscreteMeasure mu_sample(const RationalMap& f, const ProjectivePoint& seed,
                          const MuSampleOptions& opts) {
  const Backend& be = f.backend();
  if (f.degree() < 2) throw DomainError("mu_sample: degree >= 2 required");
  if (!be.archimedean()) {
    if (f.good_reduction()) return DiscreteMeasure::dirac(BerkPoint::gauss(be));
    throw DomainError(
        "mu_sample: non-archimedean sampling is only certified for good reduction");
  }
  if (seed_is_exceptional(f, seed)) throw DomainError("mu_sample: seed is exceptional");

  const std::int64_t d = f.degree();
  bool exact = true;
  {
    __int128 total = 1;
    for (std::int64_t k = 0; k < opts.depth && exact; ++k) {
      total *= d;
      if (total > opts.cap) exact = false;
    }
  }

  std::vector<LevelAtom> cur{LevelAtom{seed, Rat(1)}};
  for (std::int64_t level = 1; level <= opts.depth; ++level) {
    // Candidate preimages weighted by parent weight * multiplicity / d.
    std::vector<LevelAtom> next;
    next.reserve(cur.size() * static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const std::uint64_t rs =
          splitmix64(opts.rng_seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(level)) ^
                     static_cast<std::uint64_t>(i));
      for (const auto& [pt, mult] : preimages(f, cur[i].point, rs)) {
        next.push_back(LevelAtom{pt, cur[i].weight * Rat(mult, d)});
      }
    }
    if (!exact && static_cast<std::int64_t>(next.size()) > opts.cap) {
      // Keep cap random preimages, categorical in the exact weights, then
      // reweight uniformly.
      std::vector<double> cum(next.size());
      double acc = 0.0;
      for (std::size_t i = 0; i < next.size(); ++i) {
        acc += next[i].weight.to_double();
        cum[i] = acc;
      }
      std::vector<LevelAtom> kept;
      kept.reserve(static_cast<std::size_t>(opts.cap));
      std::uint64_t state = splitmix64(opts.rng_seed ^ 0xa5a5a5a5a5a5a5a5ULL ^
                                       static_cast<std::uint64_t>(level));
      state = splitmix64(state);
      // Systematic resampling: one offset, stride 1/cap. Duplicates arise
      // only where a single candidate carries more than 1/cap of the mass.
      const double u0 = uniform01(state) / static_cast<double>(opts.cap);
      for (std::int64_t k = 0; k < opts.cap; ++k) {
        const double u = (u0 + static_cast<double>(k) / static_cast<double>(opts.cap)) * acc;
        const auto it = std::lower_bound(cum.begin(), cum.end(), u);
        const std::size_t idx =
            std::min(next.size() - 1, static_cast<std::size_t>(it - cum.begin()));
        kept.push_back(LevelAtom{next[idx].point, Rat(1, opts.cap)});
      }
      next = std::move(kept);
    }
    cur = std::move(next);
  }

  std::sort(cur.begin(), cur.end(), [](const LevelAtom& x, const LevelAtom& y) {
    return atom_sort_key(x.point) < atom_sort_key(y.point);
  });
  // Merge coincident atoms (a resampled level can repeat points).
  std::vector<WeightedAtom> atoms;
  for (const auto& la : cur) {
    if (!atoms.empty()) {
      const auto& prev = atoms.back().point;
      if (!prev.is_infinity() && !la.point.is_infinity() &&
          atom_sort_key(la.point) == atom_sort_key(prev.point())) {
        atoms.back().weight = atoms.back().weight + la.weight;
        continue;
      }
      if (prev.is_infinity() && la.point.is_infinity()) {
        atoms.back().weight = atoms.back().weight + la.weight;
        continue;
      }
    }
    atoms.push_back(WeightedAtom{BerkPoint::classical(la.point), la.weight});
  }
  return DiscreteMeasure(be, std::move(atoms));
}

}  // namespace berkdyn
