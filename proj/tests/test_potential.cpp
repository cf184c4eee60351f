#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "berkdyn/potential.hpp"

using namespace berkdyn;

namespace {

Poly from_ints(const Backend& be, const std::vector<std::int64_t>& cs) {
  std::vector<Scalar> coeffs;
  for (auto c : cs) coeffs.push_back(Scalar::from_int(be, c));
  return Poly::from_dense(be, coeffs);
}

RationalMap squaring(const Backend& be) {
  return RationalMap::from_fraction(from_ints(be, {0, 0, 1}), from_ints(be, {1}));
}

RationalMap const_map(const Backend& be, std::int64_t v) {
  return RationalMap::constant(ProjectivePoint::from_affine(Scalar::from_int(be, v)));
}

BerkPoint cpt(double re, double im) {
  return BerkPoint::classical(ProjectivePoint::from_affine(Scalar::complex_value({re, im})));
}

const double kLog2 = std::log(2.0);

}  // namespace

TEST_CASE("escape-rate step") {
  const Backend bc = Backend::complex_field();
  const RationalMap f = squaring(bc);
  // Unit representative of z = 2 is (1,2)/sqrt(5); F maps it to (1,4)/5.
  CHECK(std::abs(t_step(f, cpt(2.0, 0.0)) - 0.5 * std::log(17.0 / 25.0)) < 1e-14);
  CHECK(t_step(f, cpt(0.0, 0.0)) == 0.0);
  CHECK(t_step(f, BerkPoint::infinity(bc)) == 0.0);

  const Backend b5 = Backend::padic(5, 14);
  const RationalMap g = squaring(b5);
  CHECK(t_step_vlog(g, BerkPoint::gauss(b5)) == 0.0);
  CHECK(t_step_vlog(g, BerkPoint::disk(Scalar::from_int(b5, 3), -2.0)) == 0.0);
  CHECK(t_step_vlog(g, BerkPoint::classical_affine(Scalar::from_rational(b5, Rat(1, 5)))) == 0.0);
  CHECK(t_step(g, BerkPoint::gauss(b5)) == 0.0);
}

TEST_CASE("sup bound of the step") {
  const Backend b5 = Backend::padic(5, 14);
  CHECK(t_sup_bound(squaring(b5)) == 0.0);  // good reduction
  const Backend bc = Backend::complex_field();
  const double bound = t_sup_bound(squaring(bc));
  CHECK(bound > 0.0);
  CHECK(bound < 10.0);
  // The bound really dominates the step at scattered points.
  for (double r : {0.0, 0.3, 1.0, 4.0})
    CHECK(std::abs(t_step(squaring(bc), cpt(r, 0.2))) <= bound);
}

TEST_CASE("green of the squaring map over C") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  GreenConfig cfg;
  cfg.iterations = 40;

  // Fixed points of the lift: exactly zero.
  CHECK(green(f, cpt(0.0, 0.0), cfg).log_value == 0.0);
  CHECK(green(f, BerkPoint::infinity(be), cfg).log_value == 0.0);

  // On the unit circle the partial sum telescopes to -log(2)/2 (1 - 2^-n).
  const double expect = -0.5 * kLog2 * (1.0 - std::pow(2.0, -40.0));
  for (double th : {0.0, 0.7, 2.1, 4.4}) {
    const KernelValue g = green(f, cpt(std::cos(th), std::sin(th)), cfg);
    CHECK(std::abs(g.log_value - expect) < 1e-12);
    CHECK(g.error_radius > 0.0);
    CHECK(g.error_radius < 1e-10);
  }

  // Outside the unit disk the series telescopes to log|z| - (1/2)log(1+|z|^2).
  const KernelValue big = green(f, cpt(100.0, 0.0), cfg);
  CHECK(std::abs(big.log_value - (std::log(100.0) - 0.5 * std::log(10001.0))) < 1e-12);
}

TEST_CASE("green is exactly zero under good reduction") {
  const Backend b5 = Backend::padic(5, 14);
  const RationalMap f = squaring(b5);
  for (const BerkPoint& s :
       {BerkPoint::gauss(b5), BerkPoint::disk(Scalar::from_int(b5, 7), -3.0),
        BerkPoint::disk(Scalar::zero(b5), 1.5),
        BerkPoint::classical_affine(Scalar::from_rational(b5, Rat(2, 5))),
        BerkPoint::infinity(b5)}) {
    const KernelValue g = green(f, s);
    CHECK(g.log_value == 0.0);
    CHECK(g.error_radius == 0.0);
  }
}

TEST_CASE("green scaling law through the recorded lift scale") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  std::uint64_t state = 31;
  for (int k = 0; k < 10; ++k) {
    const double cr = 4.0 * uniform01((state = splitmix64(state))) - 2.0;
    const double ci = 4.0 * uniform01((state = splitmix64(state))) - 2.0;
    const std::complex<double> c(cr, ci);
    if (std::abs(c) < 1e-3) continue;
    const Scalar sc = Scalar::complex_value(c);
    const RationalMap scaled = RationalMap::from_lift(f.f0().scaled(sc), f.f1().scaled(sc));
    const BerkPoint at = cpt(0.37, -1.1);
    const double gf = green(f, at).log_value + f.input_green_offset();
    const double gc = green(scaled, at).log_value + scaled.input_green_offset();
    CHECK(std::abs((gc - gf) - std::log(std::abs(c))) < 1e-10);
  }
}

TEST_CASE("potential against the exact root measure of z^D = 1") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  const RationalMap one = const_map(be, 1);
  const std::int64_t n = 6, D = 64;
  const DiscreteMeasure nu = nu_measure_complex(f, one, n);
  REQUIRE(nu.atoms().size() == 64);

  GreenConfig cfg;
  for (const std::complex<double> z : {std::complex<double>(2.0, 1.0),
                                       std::complex<double>(0.3, -0.4),
                                       std::complex<double>(-1.7, 0.2)}) {
    const BerkPoint s = cpt(z.real(), z.imag());
    const KernelValue pot = potential(f, nu, s);
    // Reassemble the bare kernel integral and compare with the closed form
    //   (1/D) log|z^D - 1| - (1/2)log(1+|z|^2) - (1/2)log 2.
    double gsum = 0.0;
    for (const auto& atom : nu.atoms())
      gsum += atom.weight.to_double() * green(f, atom.point, cfg).log_value;
    const double kint = pot.log_value + green(f, s, cfg).log_value + gsum;
    const double closed = std::log(std::abs(std::pow(z, D) - 1.0)) / static_cast<double>(D) -
                          0.5 * std::log1p(std::norm(z)) - 0.5 * kLog2;
    CHECK(std::abs(kint - closed) < 1e-9);
  }
}

TEST_CASE("equilibrium potential limit for the unit circle") {
  // With D = 2^12 roots of unity the kernel integral is within 1e-9 of the
  // equilibrium potential log^+|z| - (1/2)log(1+|z|^2) - (1/2)log 2 away
  // from the circle.
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  const DiscreteMeasure nu = nu_measure_complex(f, const_map(be, 1), 12);
  GreenConfig cfg;
  double gsum = 0.0;
  for (const auto& atom : nu.atoms())
    gsum += atom.weight.to_double() * green(f, atom.point, cfg).log_value;
  for (const std::complex<double> z :
       {std::complex<double>(2.0, 0.0), std::complex<double>(0.5, 0.1),
        std::complex<double>(0.0, 3.0)}) {
    const BerkPoint s = cpt(z.real(), z.imag());
    const double kint = potential(f, nu, s).log_value + green(f, s, cfg).log_value + gsum;
    const double limit = std::log(std::max(1.0, std::abs(z))) - 0.5 * std::log1p(std::norm(z)) -
                         0.5 * kLog2;
    CHECK(std::abs(kint - limit) < 1e-9);
  }
}

TEST_CASE("potential hits the -infinity marker at an atom") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  const DiscreteMeasure nu = nu_measure_complex(f, const_map(be, 1), 3);
  const KernelValue pot = potential(f, nu, cpt(1.0, 0.0));  // 1 is an 8th root of 1
  CHECK(pot.neg_infinite);
}

TEST_CASE("energy of the gauss mass vanishes identically") {
  const Backend b5 = Backend::padic(5, 14);
  const RationalMap f = squaring(b5);
  const DiscreteMeasure mu = DiscreteMeasure::dirac(BerkPoint::gauss(b5));
  const KernelValue e = energy(f, mu);
  CHECK(e.log_value == 0.0);
  CHECK(e.error_radius == 0.0);
  const VEstimate v = v_estimate(f, mu);
  CHECK(v.energy.log_value == 0.0);
  CHECK(v.diagnostic_sup == 0.0);
}

TEST_CASE("two-atom energy oracle") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  std::vector<WeightedAtom> atoms;
  atoms.push_back({cpt(2.0, 0.0), Rat(1, 2)});
  atoms.push_back({cpt(0.5, 0.0), Rat(1, 2)});
  const DiscreteMeasure mu(be, atoms);
  GreenConfig cfg;
  const double k01 = canonical_kernel_log(atoms[0].point, atoms[1].point);
  const double g0 = green(f, atoms[0].point, cfg).log_value;
  const double g1 = green(f, atoms[1].point, cfg).log_value;
  // 2 w0 w1 (K - g0 - g1)
  const double expect = 2.0 * 0.25 * (k01 - g0 - g1);
  CHECK(std::abs(energy(f, mu).log_value - expect) < 1e-12);
}

TEST_CASE("sample bias of the discrete equilibrium energy is log(D)/D") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  const std::int64_t n = 12, D = 4096;
  const DiscreteMeasure nu = nu_measure_complex(f, const_map(be, 1), n);
  const VEstimate v = v_estimate(f, nu);
  const double bias = std::log(static_cast<double>(D)) / static_cast<double>(D);
  CHECK(std::abs(v.energy.log_value - bias) < 1e-6);
  // All leave-one-out potentials coincide by symmetry, so the Frostman
  // diagnostic collapses.
  CHECK(v.diagnostic_sup < 1e-9);
}

TEST_CASE("leave-one-out mean reproduces the off-diagonal energy") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  std::uint64_t state = 55;
  std::vector<WeightedAtom> atoms;
  Rat mass(0);
  for (int k = 0; k < 37; ++k) {
    const double re = 3.0 * uniform01((state = splitmix64(state))) - 1.5;
    const double im = 3.0 * uniform01((state = splitmix64(state))) - 1.5;
    const Rat w(1 + static_cast<std::int64_t>((state = splitmix64(state)) % 5), 111);
    atoms.push_back({cpt(re, im), w});
    mass = mass + w;
  }
  for (auto& a : atoms) a.weight = a.weight / mass;
  const DiscreteMeasure mu(be, atoms);

  GreenConfig cfg;
  const KernelValue e = energy(f, mu, cfg);
  // Recompute the weighted mean of leave-one-out potentials directly.
  double mean = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double pot = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (i == j) continue;
      pot += atoms[j].weight.to_double() *
             phi_kernel(f, atoms[i].point, atoms[j].point, cfg).log_value;
    }
    mean += atoms[i].weight.to_double() * pot;
  }
  CHECK(std::abs(e.log_value - mean) < 1e-9);
  const VEstimate v = v_estimate(f, mu, cfg);
  CHECK(v.energy.log_value == e.log_value);
  CHECK(v.diagnostic_sup >= 0.0);
}

TEST_CASE("proximity routes agree over C") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  const RationalMap a = const_map(be, 1);
  const RationalMap f2 = RationalMap::from_fraction(from_ints(be, {-1, 0, 1}), from_ints(be, {1}));
  const RationalMap id = RationalMap::identity(be);
  std::uint64_t state = 404;
  for (int k = 0; k < 100; ++k) {
    const double re = 4.0 * uniform01((state = splitmix64(state))) - 2.0;
    const double im = 4.0 * uniform01((state = splitmix64(state))) - 2.0;
    const ProjectivePoint z = ProjectivePoint::from_affine(Scalar::complex_value({re, im}));
    const double direct1 = proximity(f, a, BerkPoint::classical(z)).log_value;
    CHECK(std::abs(direct1 - proximity_factor_route(f, a, z)) < 1e-9);
    const double direct2 = proximity(f2, id, BerkPoint::classical(z)).log_value;
    CHECK(std::abs(direct2 - proximity_factor_route(f2, id, z)) < 1e-9);
  }
}

TEST_CASE("proximity at classical points equals the seminorm route") {
  const Backend b5 = Backend::padic(5, 14);
  const RationalMap f = squaring(b5);
  const RationalMap a = const_map(b5, 1);
  const HomogeneousForm w = wedge_form(f, a);
  std::uint64_t state = 606;
  for (int k = 0; k < 100; ++k) {
    const std::int64_t v = static_cast<std::int64_t>((state = splitmix64(state)) % 7) - 3;
    const std::int64_t unit = 1 + static_cast<std::int64_t>((state = splitmix64(state)) % 400);
    if (unit % 5 == 0) continue;
    const Scalar z = Scalar::from_int(b5, unit) * Scalar::uniformizer(b5).pow(v);
    const double direct = proximity_vlog(f, a, BerkPoint::classical_affine(z));
    double semi = gauss_seminorm_vlog(w.dehomogenized(), z, kNegInf);
    for (const RationalMap* m : {&f, &a}) {
      semi -= std::max(gauss_seminorm_vlog(m->f0().dehomogenized(), z, kNegInf),
                       gauss_seminorm_vlog(m->f1().dehomogenized(), z, kNegInf));
    }
    const bool both_neg_inf = std::isinf(direct) && std::isinf(semi);
    CHECK((direct == semi || both_neg_inf));
  }
}

TEST_CASE("disk proximity versus the naive composition") {
  // phi1 = z, phi2 = z + z^2 at B(0, 1/5): the canonical proximity doubles
  // the naive pointwise value.
  const Backend b5 = Backend::padic(5, 14);
  const RationalMap id = RationalMap::identity(b5);
  const RationalMap g = RationalMap::from_fraction(from_ints(b5, {0, 1, 1}), from_ints(b5, {1}));
  const BerkPoint s = BerkPoint::disk(Scalar::zero(b5), -1.0);

  CHECK(proximity_vlog(id, g, s) == -2.0);
  const KernelValue prox = proximity(id, g, s);
  const KernelValue naive = naive_pointwise_proximity(id, g, s);
  const double log5 = std::log(5.0);
  CHECK(prox.log_value == -2.0 * log5);
  CHECK(naive.log_value == -log5);
  CHECK(prox.log_value - naive.log_value == -log5);
}

TEST_CASE("identically equal maps are rejected") {
  const Backend b5 = Backend::padic(5, 14);
  const RationalMap f = squaring(b5);
  CHECK_THROWS_AS(proximity(f, f, BerkPoint::gauss(b5)), DomainError);
}

TEST_CASE("proximity -infinity marker at coincident images") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  const RationalMap a = const_map(be, 1);
  const KernelValue p = proximity(f, a, cpt(1.0, 0.0));  // f(1) = 1 = a(1)
  CHECK(p.neg_infinite);
}

TEST_CASE("weighted proximity wiring") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  const RationalMap a = const_map(be, 1);
  const BerkPoint s = cpt(3.0, 0.0);
  GreenConfig cfg;
  const std::int64_t n = 2;
  const RationalMap fn = f.iterate(n);
  const KernelValue expect_p = proximity(fn, a, s);
  const double g1 = green(f, BerkPoint::classical(fn.evaluate(s.point())), cfg).log_value;
  const double g2 = green(f, BerkPoint::classical(a.evaluate(s.point())), cfg).log_value;
  const KernelValue w = weighted_proximity(f, a, s, n, cfg, 0.25);
  CHECK(std::abs(w.log_value - (expect_p.log_value - g1 - g2 - 0.25)) < 1e-12);
}

TEST_CASE("normalized proximity sequence is exact in the value group") {
  const Backend b2 = Backend::laurent(2, 16);
  const RationalMap f = RationalMap::from_fraction(from_ints(b2, {0, 1, 1}), from_ints(b2, {1}));
  const RationalMap id = RationalMap::identity(b2);
  for (std::int64_t m = 1; m <= 3; ++m) {
    const BerkPoint s = BerkPoint::disk(Scalar::zero(b2), -static_cast<double>(m));
    const auto seq = condition3_sequence(f, id, s, {2, 4});
    for (const auto& cv : seq) {
      CHECK(cv.vlog_over_log_p == -static_cast<double>(m));
      CHECK(cv.value == -static_cast<double>(m) * std::log(2.0));
      CHECK(!cv.neg_infinite);
    }
  }
}

TEST_CASE("valiron average") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  const RationalMap a = const_map(be, 2);
  MuSampleOptions mopts;
  mopts.depth = 8;
  const DiscreteMeasure mu = mu_sample(f, ProjectivePoint::from_affine(Scalar::complex_value({2.0, 0.0})), mopts);
  const ValironValue v3 = valiron_integral(f, a, mu, 3);
  CHECK(v3.defined);
  CHECK(v3.excluded_atoms == 0);
  CHECK(std::abs(v3.value) < 0.5);
  const ValironValue v6 = valiron_integral(f, a, mu, 6);
  CHECK(std::abs(v6.value) < std::abs(v3.value));
}

TEST_CASE("measure comparison") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  const RationalMap one = const_map(be, 1);
  const DiscreteMeasure nu6 = nu_measure_complex(f, one, 6);
  const DiscreteMeasure nu9 = nu_measure_complex(f, one, 9);

  std::vector<BerkPoint> pts;
  for (int k = 0; k < 12; ++k) {
    const double th = 0.05 + 6.28318530717958647692 * k / 12.0;
    pts.push_back(cpt(1.001 * std::cos(th), 1.001 * std::sin(th)));
  }
  pts.push_back(cpt(0.2, 0.0));
  pts.push_back(cpt(3.0, 0.0));

  const CompareReport self = compare_measures(nu6, nu6, f, pts);
  CHECK(self.sup_diff == 0.0);
  CHECK(self.mean_diff == 0.0);
  CHECK(self.skipped == 0);

  const CompareReport rep = compare_measures(nu6, nu9, f, pts);
  CHECK(rep.sup_diff > 0.0);
  CHECK(rep.sup_diff < 0.05);
  CHECK(rep.point_diffs.size() == pts.size());
  REQUIRE(rep.annuli.size() == 1);
  CHECK(rep.annuli[0].nu_mass == Rat(1));
  CHECK(rep.annuli[0].mu_mass == Rat(1));

  // A test point sitting on an atom is skipped, not propagated as -inf.
  std::vector<BerkPoint> onatom = pts;
  onatom.push_back(cpt(1.0, 0.0));
  const CompareReport rep2 = compare_measures(nu6, nu9, f, onatom);
  CHECK(rep2.skipped == 1);
  CHECK(std::isnan(rep2.point_diffs.back()));
}

TEST_CASE("annulus mass") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  const DiscreteMeasure nu = nu_measure_complex(f, const_map(be, 1), 4);
  CHECK(annulus_mass(nu, 0.9, 1.1) == Rat(1));
  CHECK(annulus_mass(nu, 0.0, 0.5) == Rat(0));
  const DiscreteMeasure zero = nu_measure_complex(f, const_map(be, 0), 4);
  CHECK(annulus_mass(zero, 0.9, 1.1) == Rat(0));
  CHECK(annulus_mass(zero, 0.0, 0.5) == Rat(1));
}
