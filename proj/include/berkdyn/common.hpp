#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace berkdyn {

// Error hierarchy. Everything thrown by this library derives from Error so
// callers can distinguish library failures from std:: failures at one catch.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operands from different backends, or same backend with different (p, N).
struct BackendMismatch : Error {
  using Error::Error;
};

// A non-archimedean result whose valuation cannot be distinguished from
// +infinity at the working precision, surfaced where a definite value is
// required. Never silently becomes zero.
struct PrecisionExhausted : Error {
  using Error::Error;
};

// Operation outside its domain (division by exact zero, unsupported
// backend/point combination, degenerate lift, ...).
struct DomainError : Error {
  using Error::Error;
};

// Iteration or construction would exceed the configured degree budget.
struct BudgetExceeded : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

// A numerical routine failed to certify its result (root finder did not
// converge, determinant pivot lost, ...). Partial results are flagged, not
// returned as if complete.
struct ComputationError : Error {
  using Error::Error;
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// Valuation sentinel for exact zero (valuation +infinity).
inline constexpr std::int64_t kValInfinity = std::numeric_limits<std::int64_t>::max();

// Exact rational on 64-bit numerator/denominator, normalized with den > 0 and
// gcd(num, den) = 1. Intermediate products run in 128 bits; overflow of the
// normalized result throws instead of wrapping.
class Rat {
 public:
  constexpr Rat() = default;
  Rat(std::int64_t num, std::int64_t den = 1) : n_(num), d_(den) { normalize_small(); }

  static Rat from_i128(__int128 num, __int128 den);

  std::int64_t num() const { return n_; }
  std::int64_t den() const { return d_; }

  double to_double() const { return static_cast<double>(n_) / static_cast<double>(d_); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return from_i128(static_cast<__int128>(a.n_) * b.d_ + static_cast<__int128>(b.n_) * a.d_,
                     static_cast<__int128>(a.d_) * b.d_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return from_i128(static_cast<__int128>(a.n_) * b.d_ - static_cast<__int128>(b.n_) * a.d_,
                     static_cast<__int128>(a.d_) * b.d_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return from_i128(static_cast<__int128>(a.n_) * b.n_, static_cast<__int128>(a.d_) * b.d_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.n_ == 0) throw DomainError("rational division by zero");
    return from_i128(static_cast<__int128>(a.n_) * b.d_, static_cast<__int128>(a.d_) * b.n_);
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }
  Rat operator-() const { return Rat(-n_, d_); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.n_ == b.n_ && a.d_ == b.d_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return static_cast<__int128>(a.n_) * b.d_ < static_cast<__int128>(b.n_) * a.d_;
  }
  friend bool operator<=(const Rat& a, const Rat& b) { return a < b || a == b; }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

  std::string str() const {
    if (d_ == 1) return std::to_string(n_);
    return std::to_string(n_) + "/" + std::to_string(d_);
  }

 private:
  void normalize_small() {
    if (d_ == 0) throw DomainError("rational with zero denominator");
    if (d_ < 0) { n_ = -n_; d_ = -d_; }
    std::int64_t g = std::gcd(n_ < 0 ? -n_ : n_, d_);
    if (g > 1) { n_ /= g; d_ /= g; }
  }
  std::int64_t n_ = 0;
  std::int64_t d_ = 1;
};

inline Rat Rat::from_i128(__int128 num, __int128 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) { num = -num; den = -den; }
  __int128 a = num < 0 ? -num : num;
  __int128 b = den;
  while (b != 0) { __int128 t = a % b; a = b; b = t; }
  if (a > 1) { num /= a; den /= a; }
  constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
  if (num > lim || num < -lim || den > lim) throw DomainError("rational overflow");
  Rat r;
  r.n_ = static_cast<std::int64_t>(num);
  r.d_ = static_cast<std::int64_t>(den);
  return r;
}

// splitmix64: stable stream derivation for per-level RNG seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Portable uniform double in [0,1) from a 64-bit state; avoids
// std::uniform_real_distribution whose output is implementation-defined.
inline double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace berkdyn
