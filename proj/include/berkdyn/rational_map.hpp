#pragma once

#include "berkdyn/berkovich.hpp"

namespace berkdyn {

inline constexpr std::int64_t kDefaultDegreeBudget = 1 << 14;

// Binary homogeneous form of formal degree d in the chart variables (x, y):
// sum_k c_k x^(d-k) y^k, stored as the sparse polynomial sum_k c_k z^k.
// Forms multiply by convolving their coefficient polynomials (degrees add).
class HomogeneousForm {
 public:
  HomogeneousForm(std::int64_t formal_degree, Poly coeffs);

  std::int64_t formal_degree() const { return deg_; }
  const Poly& coeffs() const { return c_; }
  const Backend& backend() const { return c_.backend(); }
  bool is_zero() const { return c_.is_zero(); }

  Scalar eval(const Scalar& x, const Scalar& y) const;
  // F(1, z): the coefficient polynomial itself.
  const Poly& dehomogenized() const { return c_; }

  friend HomogeneousForm operator*(const HomogeneousForm& a, const HomogeneousForm& b);
  friend HomogeneousForm operator-(const HomogeneousForm& a, const HomogeneousForm& b);
  HomogeneousForm scaled(const Scalar& s) const;
  HomogeneousForm pow(std::int64_t e, std::int64_t degree_budget) const;
  // Substitution (x, y) -> (g0, g1) for forms g0, g1 of equal degree.
  HomogeneousForm compose(const HomogeneousForm& g0, const HomogeneousForm& g1,
                          std::int64_t degree_budget) const;

 private:
  std::int64_t deg_;
  Poly c_;
};

// A rational self-map of P^1 held as a normalized homogeneous lift (f0, f1),
// with pi(f0(x,y), f1(x,y)) = f(pi(x,y)) in the chart z = y/x. Normalization
// at construction scales the pair to unit coefficient sup-norm (over C) or
// maximal coefficient absolute value exactly 1 via a power of the
// uniformizer (non-archimedean); the applied log-scale is recorded because
// the dynamical Green function of a lift shifts by log|c|/(d-1) under
// rescaling by c.
//
// Nondegeneracy (no common projective root of f0, f1) is certified by a
// nonzero Sylvester resultant at construction for degrees up to
// kEagerResultantDegree; iterates inherit nondegeneracy from the base map
// and skip re-certification.
class RationalMap {
 public:
  static constexpr std::int64_t kEagerResultantDegree = 96;

  static RationalMap from_lift(HomogeneousForm f0, HomogeneousForm f1);
  // f = num / den as affine polynomials; lift degree = max of the degrees.
  static RationalMap from_fraction(const Poly& num, const Poly& den,
                                   std::int64_t degree_budget = kDefaultDegreeBudget);
  static RationalMap constant(const ProjectivePoint& value);
  static RationalMap identity(const Backend& be);

  const Backend& backend() const { return f0_.backend(); }
  std::int64_t degree() const { return f0_.formal_degree(); }
  const HomogeneousForm& f0() const { return f0_; }
  const HomogeneousForm& f1() const { return f1_; }
  // f0 = alpha x^d (or a finite constant): affine images of finite points
  // are polynomial in z.
  bool is_polynomial() const;
  // Leading scalar alpha of a polynomial map's f0.
  Scalar poly_denominator() const;

  // Natural log of the scale s with stored = s * raw_input.
  double lift_scale_log() const { return lift_scale_log_; }
  // green(raw input lift) = green(stored lift) + input_green_offset().
  double input_green_offset() const;

  ProjectivePoint evaluate(const ProjectivePoint& p) const;
  RationalMap iterate(std::int64_t n, std::int64_t degree_budget = kDefaultDegreeBudget) const;

  // Sylvester resultant of (f0, f1) as stored. Cached after first use.
  const Scalar& resultant() const;
  // Non-archimedean: normalized integral lift with |Res| = 1, certifying
  // that the canonical measure is the Dirac mass at the Gauss point.
  bool good_reduction() const;

 private:
  RationalMap(HomogeneousForm f0, HomogeneousForm f1, double scale_log, bool skip_cert);
  HomogeneousForm f0_, f1_;
  double lift_scale_log_ = 0.0;
  mutable std::optional<Scalar> resultant_;
};

// f0_f * f1_g - f1_f * f0_g; its projective roots are the solutions of
// f(z) = g(z) with multiplicity. Formal degree deg f + deg g.
HomogeneousForm wedge_form(const RationalMap& f, const RationalMap& g);

// Determinant of the Sylvester matrix of two binary forms of equal formal
// degree (exact over the non-archimedean backends, partial-pivot elimination
// over C).
Scalar sylvester_resultant(const HomogeneousForm& a, const HomogeneousForm& b);

// Vanishing order of wedge_form(f, const f(z)) at z; equals the local degree
// of f at z. Over C zeros are recognized at relative tolerance 1e-8.
std::int64_t local_degree(const RationalMap& f, const ProjectivePoint& z);

struct ExceptionalSet {
  // Cycles of length 1 or 2; every point has local degree = deg f along the
  // whole cycle. At most two points in total.
  std::vector<std::vector<ProjectivePoint>> cycles;
  // False when some fixed-point candidates could not be certified inside the
  // base field (their membership was left undecided).
  bool complete = true;
};

ExceptionalSet exceptional_set(const RationalMap& f);

// Exact image of a disk under a polynomial map (non-archimedean):
// B(a, r) maps onto B(f(a), s) with s = max_{k>=1} |c_k| r^k for the Taylor
// coefficients c_k of f at a.
BerkPoint disk_image(const RationalMap& f, const BerkPoint& s);

}  // namespace berkdyn
