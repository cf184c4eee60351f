#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "berkdyn/poly.hpp"

using namespace berkdyn;

namespace {

Poly from_ints(const Backend& be, const std::vector<std::int64_t>& cs) {
  std::vector<Scalar> coeffs;
  for (auto c : cs) coeffs.push_back(Scalar::from_int(be, c));
  return Poly::from_dense(be, coeffs);
}

}  // namespace

TEST_CASE("construction and normalization") {
  const Backend be = Backend::complex_field();
  const Poly w = from_ints(be, {1, 0, 2});  // 1 + 2z^2
  CHECK(w.degree() == 2);
  CHECK(w.term_count() == 2);  // zero coefficient dropped
  CHECK(w.low_exp() == 0);
  CHECK(w.coeff(1).is_zero());
  CHECK_THROWS_AS(Poly::zero(be).degree(), DomainError);
}

TEST_CASE("arithmetic and evaluation") {
  const Backend be = Backend::padic(5, 12);
  const Poly a = from_ints(be, {1, 1});      // 1 + z
  const Poly b = from_ints(be, {-1, 1});     // -1 + z
  const Poly prod = a * b;                   // z^2 - 1
  CHECK(prod.degree() == 2);
  const Scalar at3 = prod.eval(Scalar::from_int(be, 3));
  CHECK(at3.valuation() == 0);  // 8
  CHECK((at3 - Scalar::from_int(be, 8)).is_indeterminate());
  const Scalar at1 = prod.eval(Scalar::one(be));
  // 1 - 1 cancels to working precision.
  CHECK((at1.is_zero() || at1.is_indeterminate()));
}

TEST_CASE("sparse iterates stay narrow in characteristic p") {
  const Backend be = Backend::laurent(2, 10);
  // (z + z^2)^2 = z^2 + z^4 over F_2: squaring is additive.
  const Poly f = from_ints(be, {0, 1, 1});
  const Poly sq = f * f;
  CHECK(sq.term_count() == 2);
  CHECK(sq.coeff(2).exact());
  CHECK(sq.coeff(3).is_zero());
  CHECK(sq.coeff(4).exact());
}

TEST_CASE("taylor shift matches direct expansion") {
  const Backend be = Backend::padic(7, 12);
  const Poly w = from_ints(be, {2, 0, 1});  // z^2 + 2
  const Poly sh = w.taylor_shift(Scalar::from_int(be, 3));
  // (z+3)^2 + 2 = z^2 + 6z + 11
  CHECK((sh.coeff(0) - Scalar::from_int(be, 11)).is_indeterminate());
  CHECK((sh.coeff(1) - Scalar::from_int(be, 6)).is_indeterminate());
  CHECK((sh.coeff(2) - Scalar::one(be)).is_indeterminate());
}

TEST_CASE("taylor shift via Lucas stays exact in characteristic p") {
  const Backend be = Backend::laurent(3, 10);
  const Poly f = from_ints(be, {0, 1, 0, 1});  // z + z^3
  const Scalar c = Scalar::uniformizer(be);
  const Poly sh = f.taylor_shift(c);
  // f(z + t) = (t + t^3) + z(1 + 3t^2=0) + 3t z^2 + z^3 = t + t^3 + z + z^3 over F_3.
  CHECK(sh.coeff(2).is_zero());
  CHECK(sh.coeff(1).is_zero() == false);
  CHECK((sh.coeff(1) - Scalar::one(be)).is_zero());
  CHECK((sh.coeff(0) - (c + c.pow(3))).is_zero());
  CHECK((sh.coeff(3) - Scalar::one(be)).is_zero());
}

TEST_CASE("derivative in characteristic p") {
  const Backend be = Backend::laurent(3, 10);
  const Poly f = from_ints(be, {1, 0, 0, 2});  // 1 + 2z^3
  CHECK(f.derivative().is_zero());             // 6z^2 = 0 over F_3
  const Poly g = from_ints(be, {0, 0, 1});
  const Poly gd = g.derivative();
  CHECK(gd.degree() == 1);
  CHECK((gd.coeff(1) - Scalar::from_int(be, 2)).is_zero());
}

TEST_CASE("pow respects the degree budget") {
  const Backend be = Backend::complex_field();
  const Poly z = Poly::monomial(1, Scalar::one(be));
  const Poly big = z.pow(100, 1000);
  CHECK(big.degree() == 100);
  CHECK_THROWS_AS(z.pow(2000, 1000), BudgetExceeded);
}

TEST_CASE("dense round trip") {
  const Backend be = Backend::complex_field();
  const Poly w = from_ints(be, {5, -6, 0, 1});
  const auto dense = w.dense_coeffs(5);
  CHECK(dense.size() == 6);
  CHECK(dense[3].complex_val() == std::complex<double>(1.0, 0.0));
  CHECK(dense[4].is_zero());
  const Poly back = Poly::from_dense(be, dense);
  CHECK(back.degree() == 3);
  CHECK(back.term_count() == w.term_count());
}

TEST_CASE("sparsity") {
  const Backend be = Backend::complex_field();
  const Poly w = Poly::monomial(99, Scalar::one(be)) + Poly::monomial(0, Scalar::one(be));
  CHECK(w.sparsity() > 0.97);
  CHECK(Poly::zero(be).sparsity() == 1.0);
}
