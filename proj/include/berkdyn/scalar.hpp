#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "berkdyn/common.hpp"

namespace berkdyn {

enum class FieldKind : std::uint8_t { Complex, Padic, Laurent };

// A valued-field backend. Complex carries no parameters. The two
// non-archimedean backends carry the prime p (= residue characteristic) and
// the working relative precision N in base-p digits. Absolute values are
// normalized so |p| = 1/p (p-adic) and |t| = 1/p (Laurent); with that choice
// log|x| = -valuation(x) * log(p) in both.
struct Backend {
  FieldKind kind = FieldKind::Complex;
  std::int32_t p = 0;
  std::int32_t precision = 0;

  static Backend complex_field() { return Backend{FieldKind::Complex, 0, 0}; }
  static Backend padic(std::int32_t p, std::int32_t precision);
  static Backend laurent(std::int32_t p, std::int32_t precision);

  // Largest N with p^N < 2^62, the bound for single-word p-adic units.
  static std::int32_t max_precision(std::int32_t p);

  bool archimedean() const { return kind == FieldKind::Complex; }
  bool operator==(const Backend&) const = default;
  std::string describe() const;
};

// Marker for per-value precision of an exact Laurent element (finitely many
// nonzero coefficients, tail known to be zero). Exactness is what lets
// characteristic-p cancellation produce true zeros instead of indeterminates.
inline constexpr std::int32_t kExactPrec = std::numeric_limits<std::int32_t>::max();

// Exact Laurent values whose coefficient support would exceed this many terms
// are demoted to truncated values at the backend precision.
inline constexpr std::size_t kMaxExactSupport = 4096;

// An element of one of the three backends.
//
// Complex: a std::complex<double>.
//
// Padic: p^valuation * unit with the unit in [1, p^prec) and unit % p != 0,
// known to `prec` relative digits (prec <= backend precision).
//
// Laurent: t^valuation * (c0 + c1 t + ...) with c0 != 0 over F_p; either
// exact (finite support, zero tail) or known to `prec` relative digits.
//
// Two further non-archimedean states exist: exact Zero, and Indeterminate.
// An Indeterminate value is congruent to 0 at absolute precision
// `abs_floor()` but cannot be distinguished from 0; it propagates through
// arithmetic and surfaces as PrecisionExhausted wherever a definite
// valuation is required.
class Scalar {
 public:
  enum class State : std::uint8_t { Value, Zero, Indeterminate };

  Scalar() = default;

  static Scalar complex_value(std::complex<double> z);
  static Scalar from_int(const Backend& be, std::int64_t n);
  static Scalar from_rational(const Backend& be, const Rat& q);
  // p^val * unit, reduced into canonical form.
  static Scalar padic_value(const Backend& be, std::int64_t val, std::uint64_t unit);
  // t^val * sum(coeffs[i] t^i); coefficients are reduced mod p.
  static Scalar laurent_value(const Backend& be, std::int64_t val,
                              std::vector<std::uint8_t> coeffs, bool exact);
  static Scalar uniformizer(const Backend& be);  // p, or t; DomainError for complex
  static Scalar zero(const Backend& be);
  static Scalar one(const Backend& be);
  static Scalar indeterminate(const Backend& be, std::int64_t abs_floor);

  const Backend& backend() const { return be_; }
  State state() const { return st_; }
  bool is_zero() const { return st_ == State::Zero; }
  bool is_indeterminate() const { return st_ == State::Indeterminate; }
  bool definite_nonzero() const { return st_ == State::Value && (!be_.archimedean() || c_ != 0.0); }

  std::complex<double> complex_val() const;

  // Valuation of a definite value; kValInfinity for zero. Throws
  // PrecisionExhausted on indeterminate, DomainError on complex.
  std::int64_t valuation() const;
  // Absolute precision floor of an indeterminate value: the element is
  // congruent to 0 mod p^floor (resp. t^floor).
  std::int64_t abs_floor() const;
  std::uint64_t unit() const { return unit_; }
  const std::vector<std::uint8_t>& coeffs() const { return coeffs_; }
  std::int32_t precision_digits() const { return prec_; }
  bool exact() const { return !be_.archimedean() && (st_ != State::Value || prec_ == kExactPrec); }

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  Scalar pow(std::int64_t e) const;  // e >= 0, or e < 0 with invertible base

  // Structural identity of canonical representations (not field equality).
  bool identical(const Scalar& o) const;

  std::string str() const;

 private:
  friend Scalar padic_add(const Scalar& a, const Scalar& b, bool negate_b);
  friend Scalar laurent_add(const Scalar& a, const Scalar& b, bool negate_b);
  void canonicalize();

  Backend be_{};
  State st_ = State::Value;
  std::complex<double> c_{0.0, 0.0};
  std::int64_t val_ = 0;  // valuation (Value) or absolute floor (Indeterminate)
  std::int32_t prec_ = 0;
  std::uint64_t unit_ = 0;
  std::vector<std::uint8_t> coeffs_;
};

// log|x| in natural logarithm; -infinity for zero. Throws PrecisionExhausted
// on indeterminate input.
double log_abs(const Scalar& x);

// log_p|x| = -valuation(x) as a double (-infinity for zero); exact whenever
// the valuation fits a double. Non-archimedean only.
double vlog(const Scalar& x);

// |x| as a double (overflow-prone for extreme valuations; prefer log forms).
double abs_value(const Scalar& x);

// Reduction to the residue field for non-archimedean x: nullopt when x is
// not integral (valuation < 0), otherwise the class of x mod the maximal
// ideal as an integer in [0, p).
std::optional<std::int32_t> residue(const Scalar& x);

void require_same_backend(const Scalar& a, const Scalar& b);

}  // namespace berkdyn
