#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "berkdyn/projective.hpp"

using namespace berkdyn;

TEST_CASE("complex normalization is unit euclidean norm") {
  const ProjectivePoint p = ProjectivePoint::from_affine(Scalar::complex_value({3.0, 4.0}));
  const double n2 = std::norm(p.c0().complex_val()) + std::norm(p.c1().complex_val());
  CHECK(std::abs(n2 - 1.0) < 1e-14);
  CHECK(std::abs(p.affine().complex_val() - std::complex<double>(3.0, 4.0)) < 1e-14);
}

TEST_CASE("non-archimedean normalization pins one coordinate at exactly 1") {
  const Backend be = Backend::padic(5, 12);
  const ProjectivePoint p = ProjectivePoint::from_affine(Scalar::from_rational(be, Rat(1, 25)));
  // |z| > 1, so the second coordinate is the unit one.
  CHECK(p.c1().valuation() == 0);
  CHECK(p.c1().unit() == 1);
  CHECK(p.c0().valuation() == 2);

  const ProjectivePoint q = ProjectivePoint::from_affine(Scalar::from_int(be, 10));
  CHECK(q.c0().valuation() == 0);
  CHECK(q.c0().unit() == 1);
  CHECK(q.affine().valuation() == 1);
}

TEST_CASE("infinity") {
  const Backend be = Backend::padic(5, 12);
  const ProjectivePoint inf = ProjectivePoint::infinity(be);
  CHECK(inf.is_infinity());
  CHECK_THROWS_AS(inf.affine(), DomainError);
  CHECK(chordal(inf, ProjectivePoint::from_affine(Scalar::zero(be))) == 1.0);
}

TEST_CASE("chordal distance properties") {
  const auto pt = [&](double re, double im) {
    return ProjectivePoint::from_affine(Scalar::complex_value({re, im}));
  };
  const ProjectivePoint a = pt(0.3, -0.2), b = pt(-1.5, 0.4), c = pt(2.0, 2.0);
  CHECK(chordal(a, a) < 1e-15);
  CHECK(chordal(a, b) == chordal(b, a));
  CHECK(chordal(a, b) <= 1.0);
  CHECK(chordal(a, b) > 0.0);
  // Chordal triangle-like bound through the kernel form |z-w|/sqrt...sqrt.
  const double direct = std::abs(std::complex<double>(0.3, -0.2) - std::complex<double>(-1.5, 0.4)) /
                        (std::sqrt(1.0 + std::norm(std::complex<double>(0.3, -0.2))) *
                         std::sqrt(1.0 + std::norm(std::complex<double>(-1.5, 0.4))));
  CHECK(std::abs(chordal(a, b) - direct) < 1e-14);
  CHECK(std::abs(std::exp(log_chordal(b, c)) - chordal(b, c)) < 1e-14);
  CHECK(log_chordal(c, c) == kNegInf);
}

TEST_CASE("vlog chordal is exact over the non-archimedean backends") {
  const Backend be = Backend::padic(5, 12);
  const auto pt = [&](const Rat& q) {
    return ProjectivePoint::from_affine(Scalar::from_rational(be, q));
  };
  // |5 - 0| = 1/5 with both points in the unit disk.
  CHECK(vlog_chordal(pt(Rat(5)), pt(Rat(0))) == -1.0);
  // |5 - 1/5|: the max-norm denominators rescale by |1/5|.
  CHECK(vlog_chordal(pt(Rat(5)), pt(Rat(1, 5))) == 0.0);
  CHECK(vlog_chordal(pt(Rat(1, 5)), ProjectivePoint::infinity(be)) == -1.0);
  CHECK(vlog_chordal(pt(Rat(3)), pt(Rat(3))) == kNegInf);
  // Natural-log form is vlog * log p.
  CHECK(log_chordal(pt(Rat(5)), pt(Rat(0))) == -std::log(5.0));
}

TEST_CASE("wedge antisymmetry") {
  const Backend be = Backend::padic(7, 10);
  const ProjectivePoint a = ProjectivePoint::from_affine(Scalar::from_int(be, 3));
  const ProjectivePoint b = ProjectivePoint::from_affine(Scalar::from_int(be, 10));
  const Scalar w1 = wedge(a, b);
  const Scalar w2 = wedge(b, a);
  CHECK((w1 + w2).is_indeterminate());  // w2 = -w1 up to precision
  CHECK(w1.valuation() == w2.valuation());
}
