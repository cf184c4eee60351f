#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "berkdyn/ffpoly.hpp"

using namespace berkdyn;

TEST_CASE("arithmetic mod p") {
  const FFPoly a(5, {1, 2, 3});
  const FFPoly b(5, {4, 1});
  CHECK((a + b).coeffs() == std::vector<std::int32_t>{0, 3, 3});
  CHECK((a * b).degree() == 3);
  CHECK((a - a).is_zero());
  CHECK(a.eval(2) == (1 + 2 * 2 + 3 * 4) % 5);
  CHECK(FFPoly(5, {0, 0, 0}).is_zero());
}

TEST_CASE("division invariant") {
  std::uint64_t state = 5;
  for (int trial = 0; trial < 30; ++trial) {
    const std::int32_t p = (trial % 3 == 0) ? 2 : ((trial % 3 == 1) ? 5 : 13);
    auto rand_poly = [&](int deg) {
      std::vector<std::int32_t> cs;
      for (int i = 0; i <= deg; ++i)
        cs.push_back(static_cast<std::int32_t>((state = splitmix64(state)) % p));
      return FFPoly(p, cs);
    };
    const FFPoly a = rand_poly(8);
    FFPoly b = rand_poly(3);
    if (b.is_zero()) b = FFPoly::one(p);
    const auto [q, r] = FFPoly::divmod(a, b);
    CHECK(q * b + r == a);
    CHECK((r.degree() < b.degree() || r.is_zero()));
  }
}

TEST_CASE("gcd is monic and divides both") {
  const FFPoly f(7, {1, 1});        // z + 1
  const FFPoly g(7, {2, 3, 1});     // (z+1)(z+2)
  const FFPoly h(7, {6, 1});        // z + 6
  const FFPoly d = ff_gcd(f * h, g * h);
  // gcd = (z+1)(z+6) up to the monic normalization
  CHECK(d.degree() == 2);
  CHECK(d.lead() == 1);
  CHECK((f * h % d).is_zero());
  CHECK((g * h % d).is_zero());
}

TEST_CASE("squarefree decomposition reconstructs the input") {
  const std::int32_t p = 5;
  const FFPoly f1(p, {1, 1});           // z + 1
  const FFPoly f2(p, {2, 1, 1});        // z^2 + z + 2 (no root mod 5: irreducible)
  FFPoly f = FFPoly::one(p);
  for (int i = 0; i < 2; ++i) f = f * f1;
  for (int i = 0; i < 3; ++i) f = f * f2;

  const auto dec = squarefree_decomposition(f);
  FFPoly rebuilt = FFPoly::one(p);
  for (const auto& part : dec) {
    for (std::int64_t i = 0; i < part.multiplicity; ++i) rebuilt = rebuilt * part.factor;
    // Each factor is squarefree...
    CHECK(ff_gcd(part.factor, part.factor.derivative()).is_one());
    // ...and monic.
    CHECK(part.factor.lead() == 1);
  }
  CHECK(rebuilt == f.monic());

  // Multiplicities 2 and 3 with the right degrees.
  REQUIRE(dec.size() == 2);
  std::int64_t deg_by_mult[4] = {0, 0, 0, 0};
  for (const auto& part : dec) deg_by_mult[part.multiplicity] = part.factor.degree();
  CHECK(deg_by_mult[2] == 1);
  CHECK(deg_by_mult[3] == 2);
}

TEST_CASE("squarefree decomposition handles p-th powers") {
  // f = (z^2 + 1)^5 over F_5 has zero derivative; the pth-root path must
  // recover multiplicity 5.
  const std::int32_t p = 5;
  const FFPoly base(p, {1, 0, 1});
  FFPoly f = FFPoly::one(p);
  for (int i = 0; i < p; ++i) f = f * base;
  CHECK(f.derivative().is_zero());

  const auto dec = squarefree_decomposition(f);
  REQUIRE(dec.size() == 1);
  CHECK(dec[0].multiplicity == 5);
  CHECK(dec[0].factor == base.monic());
}

TEST_CASE("pth root inverts frobenius on coefficients") {
  const FFPoly g(3, {2, 1, 1});
  // g(x^3) has support only at multiples of 3.
  std::vector<std::int32_t> cs(7, 0);
  cs[0] = 2;
  cs[3] = 1;
  cs[6] = 1;
  const FFPoly gx3(3, cs);
  CHECK(gx3.pth_root() == g);
}

TEST_CASE("distinct degree factorization") {
  // x^2 + 1 over F_3 has no roots: irreducible of degree 2.
  const auto blocks1 = distinct_degree_factorization(FFPoly(3, {1, 0, 1}));
  REQUIRE(blocks1.size() == 1);
  CHECK(blocks1[0].degree == 2);
  CHECK(blocks1[0].count == 1);

  // x (x+1) (x^2+x+1) over F_2: two linears, one quadratic.
  const FFPoly f = FFPoly(2, {0, 1}) * FFPoly(2, {1, 1}) * FFPoly(2, {1, 1, 1});
  const auto blocks2 = distinct_degree_factorization(f);
  REQUIRE(blocks2.size() == 2);
  CHECK(blocks2[0].degree == 1);
  CHECK(blocks2[0].count == 2);
  CHECK(blocks2[0].product == FFPoly(2, {0, 1, 1}));  // x^2 + x
  CHECK(blocks2[1].degree == 2);
  CHECK(blocks2[1].count == 1);
}

TEST_CASE("z^4 - 1 mod 5 splits into four linear factors") {
  // Brute-force oracle: count the roots directly.
  const FFPoly f(5, {4, 0, 0, 0, 1});  // z^4 - 1
  int roots = 0;
  for (int x = 0; x < 5; ++x)
    if (f.eval(x) == 0) ++roots;
  CHECK(roots == 4);

  const auto dec = squarefree_decomposition(f);
  REQUIRE(dec.size() == 1);
  CHECK(dec[0].multiplicity == 1);
  const auto blocks = distinct_degree_factorization(dec[0].factor);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].degree == 1);
  CHECK(blocks[0].count == 4);
}

TEST_CASE("large prime bound") {
  CHECK_THROWS_AS(FFPoly(101, {1}), DomainError);
  const FFPoly ok(97, {1, 1});
  CHECK(ok.degree() == 1);
}
