#pragma once

#include <cstdint>
#include <vector>

#include "berkdyn/scalar.hpp"

namespace berkdyn {

// Univariate polynomial over one backend, stored as sparse (exponent,
// coefficient) terms in ascending exponent order. Exact-zero coefficients are
// dropped; indeterminate coefficients are kept so downstream consumers can
// account for what precision still allows. Iterates of additive maps in
// characteristic p stay narrow under this representation even at degrees in
// the tens of thousands.
class Poly {
 public:
  struct Term {
    std::int64_t exp;
    Scalar coeff;
  };

  Poly() = default;
  explicit Poly(const Backend& be) : be_(be) {}

  static Poly zero(const Backend& be) { return Poly(be); }
  static Poly constant(const Scalar& c);
  static Poly monomial(std::int64_t exp, const Scalar& c);
  // coeffs[i] is the coefficient of z^i.
  static Poly from_dense(const Backend& be, const std::vector<Scalar>& coeffs);

  const Backend& backend() const { return be_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Largest exponent present; DomainError on the zero polynomial.
  std::int64_t degree() const;
  std::int64_t low_exp() const;
  std::size_t term_count() const { return terms_.size(); }
  // Fraction of vanishing coefficients in [0, degree]; 1 for the zero poly.
  double sparsity() const;
  Scalar coeff(std::int64_t exp) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;

  Poly scaled(const Scalar& c) const;
  Poly shifted_exp(std::int64_t k) const;  // multiply by z^k (k may be negative)
  Scalar eval(const Scalar& x) const;
  // Coefficients of p(a + z). Exact Lucas expansion in characteristic p,
  // dense synthetic division otherwise. dense_guard bounds the dense degree.
  Poly taylor_shift(const Scalar& a, std::int64_t dense_guard = (1 << 15)) const;
  Poly derivative() const;
  Poly pow(std::int64_t e, std::int64_t degree_budget) const;

  std::vector<Scalar> dense_coeffs(std::int64_t upto_exp) const;

  // Rebuilds invariants after external construction of terms.
  static Poly from_terms(const Backend& be, std::vector<Term> terms);

 private:
  void normalize();
  Backend be_{};
  std::vector<Term> terms_;
};

}  // namespace berkdyn
