#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "berkdyn/common.hpp"

namespace berkdyn {

// Dense polynomial over the prime field F_p (p <= 97), ascending
// coefficients in [0, p), no leading zeros; the zero polynomial is the empty
// vector (degree -1). Used for residue-field computations: squarefree
// decomposition and distinct-degree factorization of reduction polynomials.
class FFPoly {
 public:
  FFPoly(std::int32_t p, std::vector<std::int32_t> coeffs);
  static FFPoly zero(std::int32_t p) { return FFPoly(p, {}); }
  static FFPoly one(std::int32_t p) { return FFPoly(p, {1}); }
  static FFPoly monomial(std::int32_t p, std::int64_t exp, std::int32_t c);

  std::int32_t p() const { return p_; }
  const std::vector<std::int32_t>& coeffs() const { return c_; }
  std::int64_t degree() const { return static_cast<std::int64_t>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  std::int32_t lead() const;
  std::int32_t eval(std::int32_t x) const;
  FFPoly monic() const;
  FFPoly derivative() const;
  // Inverse of Frobenius on coefficients: for f = g(x^p), returns g.
  // Requires every exponent with a nonzero coefficient to be divisible by p.
  FFPoly pth_root() const;

  friend FFPoly operator+(const FFPoly& a, const FFPoly& b);
  friend FFPoly operator-(const FFPoly& a, const FFPoly& b);
  friend FFPoly operator*(const FFPoly& a, const FFPoly& b);
  // Euclidean division; returns (quotient, remainder).
  static std::pair<FFPoly, FFPoly> divmod(const FFPoly& a, const FFPoly& b);
  friend FFPoly operator%(const FFPoly& a, const FFPoly& b);
  friend FFPoly operator/(const FFPoly& a, const FFPoly& b);
  bool operator==(const FFPoly& o) const { return p_ == o.p_ && c_ == o.c_; }
  std::string str() const;

 private:
  std::int32_t p_;
  std::vector<std::int32_t> c_;
  void normalize();
};

FFPoly ff_gcd(FFPoly a, FFPoly b);  // monic gcd
FFPoly ff_pow_mod(const FFPoly& base, std::int64_t e, const FFPoly& mod);

struct FFFactor {
  FFPoly factor;
  std::int64_t multiplicity;  // squarefree decomposition: exponent in f
};

// Multiplicity-graded squarefree decomposition of a nonzero polynomial,
// correct in characteristic p (the derivative-kills-p^th-powers case recurses
// through pth_root). Factors are monic, squarefree, pairwise coprime, and
// prod factor^multiplicity = f up to the leading unit.
std::vector<FFFactor> squarefree_decomposition(const FFPoly& f);

struct FFDegreeBlock {
  FFPoly product;        // product of all irreducible factors of this degree
  std::int64_t degree;   // common degree of those irreducibles
  std::int64_t count;    // number of irreducible factors in the block
};

// Distinct-degree factorization of a squarefree monic polynomial via
// Frobenius iteration x -> x^p mod f; terminates early once the remainder
// must be irreducible. No equal-degree splitting is performed.
std::vector<FFDegreeBlock> distinct_degree_factorization(const FFPoly& f);

}  // namespace berkdyn
