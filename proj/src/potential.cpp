#include "berkdyn/potential.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace berkdyn {

namespace {

ProjectivePoint classical_rep(const BerkPoint& s) {
  if (s.kind() == BerkPoint::Kind::Classical) return s.point();
  if (s.kind() == BerkPoint::Kind::Infinity) return ProjectivePoint::infinity(s.backend());
  throw DomainError("classical point required");
}

bool is_pointlike(const BerkPoint& s) { return s.kind() != BerkPoint::Kind::Disk; }

// Orbit step: evaluate at classical points, exact disk image at disks.
BerkPoint advance(const RationalMap& f, const BerkPoint& s) {
  if (is_pointlike(s)) return BerkPoint::classical(f.evaluate(classical_rep(s)));
  return disk_image(f, s);
}

double log_p(const Backend& be) { return std::log(static_cast<double>(be.p)); }

bool verbose_logging() {
  static const bool on = std::getenv("BERKDYN_LOG") != nullptr;
  return on;
}

}  // namespace

double t_step_vlog(const RationalMap& f, const BerkPoint& s) {
  const Backend& be = f.backend();
  if (be.archimedean()) throw BackendMismatch("t_step_vlog: non-archimedean backend required");
  if (is_pointlike(s)) {
    const ProjectivePoint p = classical_rep(s);
    const Scalar a = f.f0().eval(p.c0(), p.c1());
    const Scalar b = f.f1().eval(p.c0(), p.c1());
    return std::max(vlog(a), vlog(b));
  }
  const double s0 = gauss_seminorm_vlog(f.f0().dehomogenized(), s);
  const double s1 = gauss_seminorm_vlog(f.f1().dehomogenized(), s);
  const double size = std::max(0.0, vlog_size(s));
  return std::max(s0, s1) - static_cast<double>(f.degree()) * size;
}

double t_step(const RationalMap& f, const BerkPoint& s) {
  const Backend& be = f.backend();
  if (!be.archimedean()) return t_step_vlog(f, s) * log_p(be);
  const ProjectivePoint p = classical_rep(s);
  const Scalar a = f.f0().eval(p.c0(), p.c1());
  const Scalar b = f.f1().eval(p.c0(), p.c1());
  const double n2 = std::norm(a.complex_val()) + std::norm(b.complex_val());
  return 0.5 * std::log(n2);
}

double t_sup_bound(const RationalMap& f) {
  const std::int64_t d = f.degree();
  if (d < 2) throw DomainError("t_sup_bound: degree >= 2 required");
  const Backend& be = f.backend();
  if (!be.archimedean()) {
    const Scalar& res = f.resultant();
    if (!res.definite_nonzero())
      throw PrecisionExhausted("t_sup_bound: resultant valuation undetermined");
    return static_cast<double>(std::max<std::int64_t>(0, res.valuation())) * log_p(be);
  }
  double maxc = 0.0;
  for (const auto& t : f.f0().dehomogenized().terms())
    maxc = std::max(maxc, std::abs(t.coeff.complex_val()));
  for (const auto& t : f.f1().dehomogenized().terms())
    maxc = std::max(maxc, std::abs(t.coeff.complex_val()));
  const double dd = static_cast<double>(d);
  const double upper = std::log(std::sqrt(2.0) * (dd + 1.0) * maxc);
  const double rabs = std::abs(f.resultant().complex_val());
  const double lower = std::log(rabs) - std::log(2.0 * dd) -
                       (2.0 * dd - 1.0) * std::log(std::sqrt(2.0 * (dd + 1.0)) * maxc);
  return std::max(upper, -lower);
}

KernelValue green(const RationalMap& f, const BerkPoint& s, const GreenConfig& cfg) {
  const std::int64_t d = f.degree();
  if (d < 2) throw DomainError("green: degree >= 2 required");
  const Backend& be = f.backend();
  const bool arch = be.archimedean();

  double acc = 0.0;  // vlog units non-archimedean, natural log over C
  double powd = static_cast<double>(d);
  BerkPoint cur = s;
  for (std::int64_t k = 0; k < cfg.iterations; ++k) {
    const double t = arch ? t_step(f, cur) : t_step_vlog(f, cur);
    acc += t / powd;
    powd *= static_cast<double>(d);
    if (k + 1 < cfg.iterations) cur = advance(f, cur);
  }
  const double value = arch ? acc : acc * log_p(be);

  double dn = 1.0;
  for (std::int64_t k = 0; k < cfg.iterations; ++k) dn *= static_cast<double>(d);
  const double tail = t_sup_bound(f) / (static_cast<double>(d - 1) * dn);
  return KernelValue{value, tail, false};
}

KernelValue phi_kernel(const RationalMap& f, const BerkPoint& s, const BerkPoint& t,
                       const GreenConfig& cfg) {
  const double k = canonical_kernel_log(s, t);
  if (std::isinf(k) && k < 0) return KernelValue{kNegInf, 0.0, true};
  const KernelValue gs = green(f, s, cfg);
  const KernelValue gt = green(f, t, cfg);
  return KernelValue{k - gs.log_value - gt.log_value, gs.error_radius + gt.error_radius, false};
}

KernelValue potential(const RationalMap& f, const DiscreteMeasure& mu, const BerkPoint& s,
                      const GreenConfig& cfg) {
  const KernelValue gs = green(f, s, cfg);
  const double mass = mu.total_mass().to_double();
  double acc = 0.0;
  double err = mass * gs.error_radius;
  for (const auto& atom : mu.atoms()) {
    const double k = canonical_kernel_log(s, atom.point);
    if (std::isinf(k) && k < 0) return KernelValue{kNegInf, 0.0, true};
    const KernelValue ga = green(f, atom.point, cfg);
    const double w = atom.weight.to_double();
    acc += w * (k - ga.log_value);
    err += w * ga.error_radius;
  }
  return KernelValue{acc - mass * gs.log_value, err, false};
}

namespace {

bool all_pointlike(const DiscreteMeasure& mu) {
  for (const auto& a : mu.atoms())
    if (!is_pointlike(a.point)) return false;
  return true;
}

std::vector<FlatPt> flatten_atoms(const DiscreteMeasure& mu) {
  std::vector<FlatPt> out;
  out.reserve(mu.atoms().size());
  for (const auto& a : mu.atoms()) out.push_back(flatten(classical_rep(a.point)));
  return out;
}

std::vector<double> atom_weights(const DiscreteMeasure& mu) {
  std::vector<double> out;
  out.reserve(mu.atoms().size());
  for (const auto& a : mu.atoms()) out.push_back(a.weight.to_double());
  return out;
}

}  // namespace

KernelValue energy(const RationalMap& f, const DiscreteMeasure& mu, const GreenConfig& cfg) {
  const Backend& be = f.backend();
  const double mass = mu.total_mass().to_double();
  const auto& atoms = mu.atoms();

  std::vector<KernelValue> greens;
  greens.reserve(atoms.size());
  for (const auto& a : atoms) greens.push_back(green(f, a.point, cfg));

  double offdiag = 0.0;
  if (be.archimedean() && all_pointlike(mu)) {
    offdiag = 2.0 * pairwise_energy_parallel(flatten_atoms(mu), atom_weights(mu));
  } else {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        offdiag += 2.0 * atoms[i].weight.to_double() * atoms[j].weight.to_double() *
                   canonical_kernel_log(atoms[i].point, atoms[j].point);
      }
    }
  }

  double diag = 0.0;
  double green_part = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double w = atoms[i].weight.to_double();
    green_part += 2.0 * w * greens[i].log_value * (mass - w);
    err += 2.0 * w * mass * greens[i].error_radius;
    if (!is_pointlike(atoms[i].point)) {
      const double kii = canonical_kernel_log(atoms[i].point, atoms[i].point);
      diag += w * w * (kii - 2.0 * greens[i].log_value);
    }
  }
  const double value = offdiag - green_part + diag;
  if (std::isinf(value) && value < 0) return KernelValue{kNegInf, 0.0, true};
  return KernelValue{value, err, false};
}

VEstimate v_estimate(const RationalMap& f, const DiscreteMeasure& mu, const GreenConfig& cfg) {
  const KernelValue e = energy(f, mu, cfg);
  const auto& atoms = mu.atoms();
  const double mass = mu.total_mass().to_double();

  std::vector<KernelValue> greens;
  greens.reserve(atoms.size());
  for (const auto& a : atoms) greens.push_back(green(f, a.point, cfg));
  double gsum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    gsum += atoms[i].weight.to_double() * greens[i].log_value;

  const auto n = static_cast<std::int64_t>(atoms.size());
  std::vector<double> rowk(static_cast<std::size_t>(n), 0.0);
  if (f.backend().archimedean() && all_pointlike(mu)) {
    const auto flat = flatten_atoms(mu);
    const auto wts = atom_weights(mu);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::int64_t j = 0; j < n; ++j) {
        if (j == i) continue;
        acc += wts[static_cast<std::size_t>(j)] *
               log_wedge_abs(flat[static_cast<std::size_t>(i)], flat[static_cast<std::size_t>(j)]);
      }
      rowk[static_cast<std::size_t>(i)] = acc;
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::int64_t j = 0; j < n; ++j) {
        if (j == i) continue;
        acc += atoms[static_cast<std::size_t>(j)].weight.to_double() *
               canonical_kernel_log(atoms[static_cast<std::size_t>(i)].point,
                                    atoms[static_cast<std::size_t>(j)].point);
      }
      rowk[static_cast<std::size_t>(i)] = acc;
    }
  }

  double sup = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const double w = atoms[iu].weight.to_double();
    const double pot = rowk[iu] - greens[iu].log_value * (mass - w) - (gsum - w * greens[iu].log_value);
    sup = std::max(sup, std::abs(pot - e.log_value));
  }
  return VEstimate{e, sup};
}

double proximity_vlog(const RationalMap& f, const RationalMap& a, const BerkPoint& s) {
  const Backend& be = f.backend();
  if (be.archimedean()) throw BackendMismatch("proximity_vlog: non-archimedean backend required");
  const HomogeneousForm w = wedge_form(f, a);
  if (w.is_zero()) throw DomainError("proximity: the two maps coincide");
  if (is_pointlike(s)) {
    const ProjectivePoint u = f.evaluate(classical_rep(s));
    const ProjectivePoint v = a.evaluate(classical_rep(s));
    return vlog_chordal(u, v);
  }
  const double wn = gauss_seminorm_vlog(w.dehomogenized(), s);
  double norms = 0.0;
  for (const RationalMap* m : {&f, &a}) {
    norms += std::max(gauss_seminorm_vlog(m->f0().dehomogenized(), s),
                      gauss_seminorm_vlog(m->f1().dehomogenized(), s));
  }
  return wn - norms;
}

KernelValue proximity(const RationalMap& f, const RationalMap& a, const BerkPoint& s) {
  const Backend& be = f.backend();
  if (!be.archimedean()) {
    const double v = proximity_vlog(f, a, s);
    if (std::isinf(v) && v < 0) return KernelValue{kNegInf, 0.0, true};
    return KernelValue{v * log_p(be), 0.0, false};
  }
  if (!is_pointlike(s)) throw DomainError("proximity: disk points require a non-archimedean backend");
  const HomogeneousForm w = wedge_form(f, a);
  if (w.is_zero()) throw DomainError("proximity: the two maps coincide");
  const ProjectivePoint u = f.evaluate(classical_rep(s));
  const ProjectivePoint v = a.evaluate(classical_rep(s));
  const double k = log_chordal(u, v);
  if (std::isinf(k) && k < 0) return KernelValue{kNegInf, 0.0, true};
  return KernelValue{k, 0.0, false};
}

double proximity_factor_route(const RationalMap& f, const RationalMap& a,
                              const ProjectivePoint& z, std::uint64_t root_seed) {
  const Backend& be = f.backend();
  if (!be.archimedean()) throw BackendMismatch("proximity_factor_route: complex backend required");
  const HomogeneousForm w = wedge_form(f, a);
  if (w.is_zero()) throw DomainError("proximity: the two maps coincide");
  const Poly& wd = w.dehomogenized();
  const ComplexRoots roots = complex_roots(wd, w.formal_degree(), root_seed);

  std::int64_t eff_deg = 0;
  for (const auto& rc : roots.finite) eff_deg += rc.multiplicity;
  const double lead = std::abs(wd.coeff(eff_deg).complex_val());

  double acc = std::log(lead);
  for (const auto& rc : roots.finite) {
    const ProjectivePoint q =
        ProjectivePoint::from_affine(Scalar::complex_value(rc.value));
    acc += static_cast<double>(rc.multiplicity) *
           (log_chordal(z, q) + 0.5 * std::log1p(std::norm(rc.value)));
  }
  if (roots.infinity_multiplicity > 0) {
    acc += static_cast<double>(roots.infinity_multiplicity) *
           log_chordal(z, ProjectivePoint::infinity(be));
  }
  return acc - t_step(f, BerkPoint::classical(z)) - t_step(a, BerkPoint::classical(z));
}

KernelValue naive_pointwise_proximity(const RationalMap& f, const RationalMap& a,
                                      const BerkPoint& s) {
  const Backend& be = f.backend();
  if (be.archimedean())
    throw BackendMismatch("naive_pointwise_proximity: non-archimedean backend required");
  const BerkPoint fu = is_pointlike(s) ? BerkPoint::classical(f.evaluate(classical_rep(s)))
                                       : disk_image(f, s);
  const BerkPoint au = is_pointlike(s) ? BerkPoint::classical(a.evaluate(classical_rep(s)))
                                       : disk_image(a, s);
  const double v = hsia_vlog(fu, au);
  if (std::isinf(v) && v < 0) return KernelValue{kNegInf, 0.0, true};
  return KernelValue{v * log_p(be), 0.0, false};
}

KernelValue weighted_proximity(const RationalMap& f, const RationalMap& a, const BerkPoint& s,
                               std::int64_t n, const GreenConfig& cfg, double v_f) {
  const RationalMap fn = f.iterate(n, cfg.degree_budget);
  const KernelValue p = proximity(fn, a, s);
  if (p.neg_infinite) return p;
  const BerkPoint img_f = is_pointlike(s) ? BerkPoint::classical(fn.evaluate(classical_rep(s)))
                                          : disk_image(fn, s);
  const BerkPoint img_a = is_pointlike(s) ? BerkPoint::classical(a.evaluate(classical_rep(s)))
                                          : disk_image(a, s);
  const KernelValue g1 = green(f, img_f, cfg);
  const KernelValue g2 = green(f, img_a, cfg);
  return KernelValue{p.log_value - g1.log_value - g2.log_value - v_f,
                     p.error_radius + g1.error_radius + g2.error_radius, false};
}

std::vector<Condition3Value> condition3_sequence(const RationalMap& f, const RationalMap& a,
                                                 const BerkPoint& s,
                                                 const std::vector<std::int64_t>& ns,
                                                 std::int64_t degree_budget) {
  const Backend& be = f.backend();
  std::vector<Condition3Value> out;
  out.reserve(ns.size());
  for (const std::int64_t n : ns) {
    const RationalMap fn = f.iterate(n, degree_budget);
    double dn = 1.0;
    for (std::int64_t k = 0; k < n; ++k) dn *= static_cast<double>(f.degree());
    Condition3Value cv;
    cv.n = n;
    if (!be.archimedean()) {
      const double pv = proximity_vlog(fn, a, s);
      cv.neg_infinite = std::isinf(pv) && pv < 0;
      cv.vlog_over_log_p = pv / dn;
      cv.value = cv.neg_infinite ? kNegInf : cv.vlog_over_log_p * log_p(be);
    } else {
      const KernelValue p = proximity(fn, a, s);
      cv.neg_infinite = p.neg_infinite;
      cv.value = p.neg_infinite ? kNegInf : p.log_value / dn;
      cv.vlog_over_log_p = std::nan("");
    }
    out.push_back(cv);
  }
  return out;
}

ValironValue valiron_integral(const RationalMap& f, const RationalMap& a,
                              const DiscreteMeasure& mu, std::int64_t n,
                              const GreenConfig& cfg) {
  const RationalMap fn = f.iterate(n, cfg.degree_budget);
  double dn = 1.0;
  for (std::int64_t k = 0; k < n; ++k) dn *= static_cast<double>(f.degree());

  ValironValue out;
  double acc = 0.0;
  double wsum = 0.0;
  for (const auto& atom : mu.atoms()) {
    const KernelValue p = proximity(fn, a, atom.point);
    if (p.neg_infinite) {
      ++out.excluded_atoms;
      continue;
    }
    acc += atom.weight.to_double() * p.log_value;
    wsum += atom.weight.to_double();
  }
  if (wsum == 0.0) {
    out.defined = false;
    return out;
  }
  if (out.excluded_atoms > 0 && verbose_logging()) {
    std::fprintf(stderr, "valiron_integral: excluded %lld atoms at -infinity\n",
                 static_cast<long long>(out.excluded_atoms));
  }
  out.value = (acc / wsum) / dn;
  out.error_radius = 0.0;
  return out;
}

CompareReport compare_measures(const DiscreteMeasure& nu, const DiscreteMeasure& mu,
                               const RationalMap& f, const std::vector<BerkPoint>& test_points,
                               const CompareConfig& cfg) {
  const Backend& be = f.backend();
  if (!be.archimedean()) throw BackendMismatch("compare_measures: complex backend required");

  struct Ctx {
    std::vector<FlatPt> flat;
    std::vector<double> wts;
    double mass = 0.0;
    double gsum = 0.0;
  };
  auto build = [&](const DiscreteMeasure& m) {
    Ctx c;
    c.flat = flatten_atoms(m);
    c.wts = atom_weights(m);
    c.mass = m.total_mass().to_double();
    for (const auto& atom : m.atoms()) {
      c.gsum += atom.weight.to_double() * green(f, atom.point, cfg.green).log_value;
    }
    return c;
  };
  const Ctx cn = build(nu);
  const Ctx cm = build(mu);

  std::vector<FlatPt> targets;
  targets.reserve(test_points.size());
  for (const auto& t : test_points) targets.push_back(flatten(classical_rep(t)));

  const std::vector<double> kn = potential_batch_parallel(cn.flat, cn.wts, targets);
  const std::vector<double> km = potential_batch_parallel(cm.flat, cm.wts, targets);

  CompareReport rep;
  rep.point_diffs.assign(test_points.size(), std::nan(""));
  double sum = 0.0;
  std::int64_t used = 0;
  for (std::size_t t = 0; t < test_points.size(); ++t) {
    bool collides = false;
    for (const Ctx* c : {&cn, &cm}) {
      for (const auto& fp : c->flat) {
        if (std::exp(log_wedge_abs(fp, targets[t])) <= cfg.collision_tol) {
          collides = true;
          break;
        }
      }
      if (collides) break;
    }
    if (collides) {
      ++rep.skipped;
      if (verbose_logging())
        std::fprintf(stderr, "compare_measures: test point %zu collides with an atom, skipped\n", t);
      continue;
    }
    const double gt = green(f, test_points[t], cfg.green).log_value;
    const double un = kn[t] - cn.gsum - cn.mass * gt;
    const double um = km[t] - cm.gsum - cm.mass * gt;
    const double diff = std::abs(un - um);
    rep.point_diffs[t] = diff;
    rep.sup_diff = std::max(rep.sup_diff, diff);
    sum += diff;
    ++used;
  }
  rep.mean_diff = used > 0 ? sum / static_cast<double>(used) : 0.0;
  for (const auto& [lo, hi] : cfg.annuli) {
    rep.annuli.push_back(AnnulusRow{lo, hi, annulus_mass(nu, lo, hi), annulus_mass(mu, lo, hi)});
  }
  return rep;
}

Rat annulus_mass(const DiscreteMeasure& m, double lo, double hi) {
  Rat acc(0);
  for (const auto& atom : m.atoms()) {
    if (atom.point.kind() != BerkPoint::Kind::Classical) continue;
    if (atom.point.point().is_infinity()) continue;
    const double r = abs_value(atom.point.point().affine());
    if (r >= lo && r < hi) acc = acc + atom.weight;
  }
  return acc;
}

}  // namespace berkdyn
