#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "berkdyn/rational_map.hpp"

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

bool identical_lifts(const RationalMap& a, const RationalMap& b) {
  if (a.degree() != b.degree()) return false;
  const auto check = [](const Poly& x, const Poly& y) {
    if (x.term_count() != y.term_count()) return false;
    for (std::size_t i = 0; i < x.terms().size(); ++i) {
      if (x.terms()[i].exp != y.terms()[i].exp) return false;
      if (!x.terms()[i].coeff.identical(y.terms()[i].coeff)) return false;
    }
    return true;
  };
  return check(a.f0().dehomogenized(), b.f0().dehomogenized()) &&
         check(a.f1().dehomogenized(), b.f1().dehomogenized());
}

}  // namespace

TEST_CASE("evaluation in the affine chart") {
  const Backend be = Backend::padic(5, 14);
  const RationalMap f = squaring(be);
  CHECK(f.degree() == 2);
  CHECK(f.is_polynomial());
  const ProjectivePoint img = f.evaluate(ProjectivePoint::from_affine(Scalar::from_int(be, 3)));
  CHECK((img.affine() - Scalar::from_int(be, 9)).is_indeterminate());
  CHECK(f.evaluate(ProjectivePoint::infinity(be)).is_infinity());
}

TEST_CASE("iterate composes") {
  const Backend be = Backend::padic(5, 14);
  const RationalMap f = squaring(be);
  const RationalMap f6 = f.iterate(6);
  const RationalMap f23 = f.iterate(2).iterate(3);
  CHECK(f6.degree() == 64);
  CHECK(f23.degree() == 64);
  CHECK(identical_lifts(f6, f23));
  CHECK(identical_lifts(f.iterate(0), RationalMap::identity(be)));
}

TEST_CASE("evaluate commutes with iterate") {
  const Backend be = Backend::laurent(3, 12);
  const RationalMap f = RationalMap::from_fraction(from_ints(be, {0, 1, 0, 1}),
                                                   from_ints(be, {1}));  // z + z^3
  const RationalMap f4 = f.iterate(4);
  const Scalar t = Scalar::uniformizer(be);
  for (int k = 1; k <= 5; ++k) {
    ProjectivePoint z = ProjectivePoint::from_affine(t.pow(k) + Scalar::one(be));
    ProjectivePoint direct = z;
    for (int i = 0; i < 4; ++i) direct = f.evaluate(direct);
    const ProjectivePoint via = f4.evaluate(z);
    const Scalar w = wedge(direct, via);
    CHECK((w.is_zero() || w.is_indeterminate()));
  }

  const Backend bc = Backend::complex_field();
  const RationalMap g = RationalMap::from_fraction(from_ints(bc, {-1, 0, 1}),
                                                   from_ints(bc, {0, 1}));  // (z^2-1)/z
  const RationalMap g3 = g.iterate(3);
  for (int k = 0; k < 8; ++k) {
    const std::complex<double> z0(0.3 + 0.4 * k, -0.7 + 0.2 * k);
    ProjectivePoint z = ProjectivePoint::from_affine(Scalar::complex_value(z0));
    ProjectivePoint direct = z;
    for (int i = 0; i < 3; ++i) direct = g.evaluate(direct);
    CHECK(chordal(direct, g3.evaluate(z)) < 1e-9);
  }
}

TEST_CASE("degenerate lifts are rejected") {
  const Backend be = Backend::complex_field();
  // (z^2 - 1) / (z - 1): common root at z = 1.
  CHECK_THROWS_AS(RationalMap::from_fraction(from_ints(be, {-1, 0, 1}), from_ints(be, {-1, 1})),
                  DomainError);
}

TEST_CASE("resultant and good reduction") {
  const Backend be = Backend::padic(5, 14);
  CHECK(squaring(be).good_reduction());
  CHECK(vlog(squaring(be).resultant()) == 0.0);

  // z^2/5 spreads the resultant: no good reduction.
  const RationalMap bad =
      RationalMap::from_fraction(from_ints(be, {0, 0, 1}).scaled(Scalar::from_rational(be, Rat(1, 5))),
                                 from_ints(be, {1}));
  CHECK(!bad.good_reduction());

  // z^2 - 1/5 isn't integral either.
  const Poly num = from_ints(be, {0, 0, 1}) + Poly::constant(Scalar::from_rational(be, Rat(-1, 5)));
  CHECK(!RationalMap::from_fraction(num, from_ints(be, {1})).good_reduction());
}

TEST_CASE("lift normalization records the scale") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  CHECK(f.lift_scale_log() == 0.0);  // already unit sup-norm
  const HomogeneousForm f0(2, from_ints(be, {4}));           // 4 x^2
  const HomogeneousForm f1(2, from_ints(be, {0, 0, 4}));     // 4 y^2
  const RationalMap scaled = RationalMap::from_lift(f0, f1);
  CHECK(std::abs(scaled.lift_scale_log() - std::log(0.25)) < 1e-14);
  CHECK(std::abs(scaled.input_green_offset() - std::log(4.0)) < 1e-14);
  CHECK(identical_lifts(f, scaled));
}

TEST_CASE("wedge form of the fixed-point divisor") {
  const Backend be = Backend::padic(5, 12);
  const RationalMap f = RationalMap::identity(be);
  const RationalMap g = RationalMap::from_fraction(from_ints(be, {0, 1, 1}), from_ints(be, {1}));
  const HomogeneousForm w = wedge_form(f, g);  // x y^2 up to sign
  CHECK(w.formal_degree() == 3);
  const Poly& wd = w.dehomogenized();
  CHECK(wd.term_count() == 1);
  CHECK(wd.terms()[0].exp == 2);
  CHECK(std::abs(vlog(wd.terms()[0].coeff)) == 0.0);
}

TEST_CASE("local degree") {
  const Backend bc = Backend::complex_field();
  const RationalMap f = squaring(bc);
  CHECK(local_degree(f, ProjectivePoint::from_affine(Scalar::complex_value({0.0, 0.0}))) == 2);
  CHECK(local_degree(f, ProjectivePoint::from_affine(Scalar::complex_value({1.0, 0.0}))) == 1);
  CHECK(local_degree(f, ProjectivePoint::infinity(bc)) == 2);

  // Additive map in characteristic p: z + z^p has derivative 1, so the
  // algebraic vanishing order at the fixed point 0 is 1 even though the
  // map is wildly ramified there in the residue direction sense.
  const Backend bl = Backend::laurent(3, 12);
  const RationalMap add = RationalMap::from_fraction(from_ints(bl, {0, 1, 0, 1}),
                                                     from_ints(bl, {1}));
  CHECK(local_degree(add, ProjectivePoint::from_affine(Scalar::zero(bl))) == 1);
  CHECK(local_degree(add, ProjectivePoint::infinity(bl)) == 3);
}

TEST_CASE("exceptional sets") {
  const Backend bc = Backend::complex_field();
  const ExceptionalSet ez2 = exceptional_set(squaring(bc));
  CHECK(ez2.complete);
  CHECK(ez2.cycles.size() == 2);  // {0} and {infinity}

  const RationalMap fm1 = RationalMap::from_fraction(from_ints(bc, {-1, 0, 1}), from_ints(bc, {1}));
  const ExceptionalSet em1 = exceptional_set(fm1);
  CHECK(em1.complete);
  REQUIRE(em1.cycles.size() == 1);
  CHECK(em1.cycles[0].size() == 1);
  CHECK(em1.cycles[0][0].is_infinity());

  // 1/z^2 swaps 0 and infinity: one 2-cycle.
  const RationalMap inv = RationalMap::from_fraction(from_ints(bc, {1}), from_ints(bc, {0, 0, 1}));
  const ExceptionalSet einv = exceptional_set(inv);
  CHECK(einv.complete);
  REQUIRE(einv.cycles.size() == 1);
  CHECK(einv.cycles[0].size() == 2);

  const Backend bl = Backend::laurent(2, 12);
  const RationalMap add = RationalMap::from_fraction(from_ints(bl, {0, 1, 1}), from_ints(bl, {1}));
  const ExceptionalSet ea = exceptional_set(add);
  CHECK(ea.complete);
  REQUIRE(ea.cycles.size() == 1);
  CHECK(ea.cycles[0][0].is_infinity());
}

TEST_CASE("disk image of a polynomial map") {
  const Backend be = Backend::padic(5, 14);
  const RationalMap f = squaring(be);
  const BerkPoint img = disk_image(f, BerkPoint::disk(Scalar::zero(be), -1.0));
  CHECK(img.kind() == BerkPoint::Kind::Disk);
  CHECK(img.center().is_zero());
  CHECK(img.vlog_radius() == -2.0);

  // B(1, 1/5) -> B(1, 1/5): the linear Taylor term |2| r dominates.
  const BerkPoint img2 = disk_image(f, BerkPoint::disk(Scalar::one(be), -1.0));
  CHECK(img2.vlog_radius() == -1.0);
  CHECK((img2.center() - Scalar::one(be)).is_indeterminate());

  // Containment: f(z) lies in the image disk for sampled z in the source.
  const BerkPoint src = BerkPoint::disk(Scalar::from_int(be, 2), -2.0);
  const BerkPoint dst = disk_image(f, src);
  std::uint64_t state = 99;
  for (int k = 0; k < 100; ++k) {
    const std::uint64_t bits = (state = splitmix64(state));
    // center + 25 * (random integer in [0, 5^6))
    const Scalar dz =
        Scalar::from_int(be, static_cast<std::int64_t>(bits % 15625)) * Scalar::from_rational(be, Rat(25));
    const Scalar z = src.center() + dz;
    const Scalar img_z = f.evaluate(ProjectivePoint::from_affine(z)).affine();
    const Scalar delta = img_z - dst.center();
    const double v = delta.is_zero() ? kNegInf
                     : delta.is_indeterminate()
                         ? -static_cast<double>(delta.abs_floor())
                         : vlog(delta);
    CHECK(v <= dst.vlog_radius());
  }
}

TEST_CASE("degree budget on iterates") {
  const Backend be = Backend::complex_field();
  const RationalMap f = squaring(be);
  CHECK_THROWS_AS(f.iterate(20, 1 << 10), BudgetExceeded);
  CHECK(f.iterate(10, 1 << 10).degree() == 1024);
}
