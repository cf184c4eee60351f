#include "berkdyn/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace berkdyn {

namespace {

bool is_prime(std::int32_t n) {
  if (n < 2) return false;
  for (std::int32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t upow(std::uint64_t b, std::int32_t e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Inverse of u mod p^k (u a unit), by Hensel lifting of the mod-p inverse.
std::uint64_t unit_inverse(std::uint64_t u, std::uint64_t p, std::int32_t k) {
  std::uint64_t inv = 1;
  {  // mod-p inverse via Fermat
    std::uint64_t base = u % p, e = p - 2;
    std::uint64_t acc = 1;
    while (e) {
      if (e & 1) acc = acc * base % p;
      base = base * base % p;
      e >>= 1;
    }
    inv = acc == 0 ? 1 : acc;
  }
  std::int32_t digits = 1;
  std::uint64_t mod = p;
  while (digits < k) {
    digits = std::min(2 * digits, k);
    mod = upow(p, digits);
    unsigned __int128 t = (unsigned __int128)u * inv % mod;
    unsigned __int128 corr = (2 + (unsigned __int128)mod - t) % mod;
    inv = (std::uint64_t)((unsigned __int128)inv * corr % mod);
  }
  return inv % mod;
}

}  // namespace

Backend Backend::padic(std::int32_t p, std::int32_t precision) {
  if (!is_prime(p) || p > 97) throw DomainError("p-adic backend requires a prime p <= 97");
  if (precision < 1 || precision > max_precision(p))
    throw DomainError("p-adic precision out of range for p=" + std::to_string(p) +
                      " (max " + std::to_string(max_precision(p)) + ")");
  return Backend{FieldKind::Padic, p, precision};
}

Backend Backend::laurent(std::int32_t p, std::int32_t precision) {
  if (!is_prime(p) || p > 97) throw DomainError("Laurent backend requires a prime p <= 97");
  if (precision < 1) throw DomainError("Laurent precision must be positive");
  return Backend{FieldKind::Laurent, p, precision};
}

std::int32_t Backend::max_precision(std::int32_t p) {
  std::int32_t n = 0;
  unsigned __int128 acc = 1;
  const unsigned __int128 lim = (unsigned __int128)1 << 62;
  while (acc * (unsigned)p < lim) {
    acc *= (unsigned)p;
    ++n;
  }
  return n;
}

std::string Backend::describe() const {
  switch (kind) {
    case FieldKind::Complex: return "complex";
    case FieldKind::Padic: return "padic p=" + std::to_string(p) + " N=" + std::to_string(precision);
    case FieldKind::Laurent: return "laurent p=" + std::to_string(p) + " N=" + std::to_string(precision);
  }
  return "?";
}

void require_same_backend(const Scalar& a, const Scalar& b) {
  if (!(a.backend() == b.backend()))
    throw BackendMismatch("mixed backends: " + a.backend().describe() + " vs " +
                          b.backend().describe());
}

void Scalar::canonicalize() {
  if (be_.archimedean()) {
    st_ = (c_ == std::complex<double>(0.0, 0.0)) ? State::Zero : State::Value;
    return;
  }
  if (st_ != State::Value) {
    unit_ = 0;
    coeffs_.clear();
    if (st_ == State::Zero) val_ = kValInfinity;
    return;
  }
  if (be_.kind == FieldKind::Padic) {
    if (prec_ < 1) throw PrecisionExhausted("p-adic value with no remaining digits");
    prec_ = std::min(prec_, be_.precision);
    std::uint64_t mod = upow((std::uint64_t)be_.p, prec_);
    unit_ %= mod;
    if (unit_ == 0) throw DomainError("p-adic unit part is zero after reduction");
    if (unit_ % (std::uint64_t)be_.p == 0) throw DomainError("p-adic unit part divisible by p");
    return;
  }
  // Laurent
  std::size_t lead = 0;
  while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
  if (lead == coeffs_.size()) throw DomainError("Laurent value with zero coefficient list");
  if (lead > 0) {
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + (std::ptrdiff_t)lead);
    val_ += (std::int64_t)lead;
    if (prec_ != kExactPrec) prec_ -= (std::int32_t)lead;
  }
  if (prec_ == kExactPrec) {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    if (coeffs_.size() > kMaxExactSupport) {
      prec_ = be_.precision;
      coeffs_.resize((std::size_t)prec_, 0);
      std::size_t l2 = 0;
      while (l2 < coeffs_.size() && coeffs_[l2] == 0) ++l2;
      if (l2 == coeffs_.size()) throw DomainError("Laurent demotion lost all digits");
    }
  } else {
    if (prec_ < 1) throw PrecisionExhausted("Laurent value with no remaining digits");
    prec_ = std::min(prec_, be_.precision);
    coeffs_.resize((std::size_t)prec_, 0);
  }
}

Scalar Scalar::complex_value(std::complex<double> z) {
  Scalar s;
  s.be_ = Backend::complex_field();
  s.c_ = z;
  s.canonicalize();
  return s;
}

Scalar Scalar::zero(const Backend& be) {
  Scalar s;
  s.be_ = be;
  if (be.archimedean()) {
    s.c_ = 0.0;
    s.st_ = State::Zero;
  } else {
    s.st_ = State::Zero;
    s.val_ = kValInfinity;
  }
  return s;
}

Scalar Scalar::one(const Backend& be) { return from_int(be, 1); }

Scalar Scalar::indeterminate(const Backend& be, std::int64_t abs_floor) {
  if (be.archimedean()) throw DomainError("indeterminate state is non-archimedean only");
  Scalar s;
  s.be_ = be;
  s.st_ = State::Indeterminate;
  s.val_ = abs_floor;
  return s;
}

Scalar Scalar::from_int(const Backend& be, std::int64_t n) {
  if (be.archimedean()) return complex_value({(double)n, 0.0});
  if (n == 0) return zero(be);
  if (be.kind == FieldKind::Padic) {
    bool neg = n < 0;
    std::uint64_t m = neg ? (std::uint64_t)(-(n + 1)) + 1 : (std::uint64_t)n;
    std::int64_t v = 0;
    while (m % (std::uint64_t)be.p == 0) {
      m /= (std::uint64_t)be.p;
      ++v;
    }
    std::uint64_t mod = upow((std::uint64_t)be.p, be.precision);
    m %= mod;
    if (neg && m != 0) m = mod - m;
    if (m == 0)
      // |n| was a pure power of p times a multiple of p^N; treat the unit as 1
      // only when it truly is, otherwise the integer exceeded the window.
      throw DomainError("integer too large for p-adic precision window");
    return padic_value(be, v, m);
  }
  // Laurent: integers land in the prime field.
  std::int64_t r = n % be.p;
  if (r < 0) r += be.p;
  if (r == 0) return zero(be);
  return laurent_value(be, 0, {(std::uint8_t)r}, true);
}

Scalar Scalar::from_rational(const Backend& be, const Rat& q) {
  if (q.num() == 0) return zero(be);
  if (be.archimedean()) return complex_value({q.to_double(), 0.0});
  return from_int(be, q.num()) / from_int(be, q.den());
}

Scalar Scalar::padic_value(const Backend& be, std::int64_t val, std::uint64_t unit) {
  if (be.kind != FieldKind::Padic) throw DomainError("padic_value on non-p-adic backend");
  Scalar s;
  s.be_ = be;
  s.st_ = State::Value;
  s.val_ = val;
  s.prec_ = be.precision;
  s.unit_ = unit;
  while (s.unit_ != 0 && s.unit_ % (std::uint64_t)be.p == 0) {
    s.unit_ /= (std::uint64_t)be.p;
    ++s.val_;
  }
  s.canonicalize();
  return s;
}

Scalar Scalar::laurent_value(const Backend& be, std::int64_t val, std::vector<std::uint8_t> coeffs,
                             bool exact) {
  if (be.kind != FieldKind::Laurent) throw DomainError("laurent_value on non-Laurent backend");
  Scalar s;
  s.be_ = be;
  s.st_ = State::Value;
  s.val_ = val;
  for (auto& c : coeffs) c = (std::uint8_t)(c % be.p);
  s.coeffs_ = std::move(coeffs);
  bool all_zero = true;
  for (auto c : s.coeffs_)
    if (c != 0) { all_zero = false; break; }
  if (all_zero) return zero(be);
  s.prec_ = exact ? kExactPrec : std::min<std::int32_t>((std::int32_t)s.coeffs_.size(), be.precision);
  if (!exact) s.coeffs_.resize((std::size_t)s.prec_);
  s.canonicalize();
  return s;
}

Scalar Scalar::uniformizer(const Backend& be) {
  if (be.kind == FieldKind::Padic) return padic_value(be, 1, 1);
  if (be.kind == FieldKind::Laurent) return laurent_value(be, 1, {1}, true);
  throw DomainError("complex backend has no uniformizer");
}

std::complex<double> Scalar::complex_val() const {
  if (!be_.archimedean()) throw DomainError("complex_val on non-archimedean scalar");
  return c_;
}

std::int64_t Scalar::valuation() const {
  if (be_.archimedean()) throw DomainError("valuation on archimedean scalar");
  if (st_ == State::Indeterminate)
    throw PrecisionExhausted("valuation of indeterminate value (O(" + std::to_string(val_) + "))");
  if (st_ == State::Zero) return kValInfinity;
  return val_;
}

std::int64_t Scalar::abs_floor() const {
  if (st_ != State::Indeterminate) throw DomainError("abs_floor on determinate value");
  return val_;
}

// ---- p-adic addition/subtraction --------------------------------------------

Scalar padic_add(const Scalar& a, const Scalar& b, bool negate_b) {
  const Backend& be = a.be_;
  const std::uint64_t p = (std::uint64_t)be.p;
  // Absolute windows: a determinate value is known mod p^(val+prec); an
  // indeterminate one is known (to be ~0) mod p^floor; zero is known exactly.
  auto window = [&](const Scalar& x) -> std::int64_t {
    if (x.st_ == Scalar::State::Zero) return kValInfinity;
    if (x.st_ == Scalar::State::Indeterminate) return x.val_;
    return x.val_ + x.prec_;
  };
  std::int64_t A = std::min(window(a), window(b));
  if (a.st_ == Scalar::State::Zero && b.st_ == Scalar::State::Zero) return Scalar::zero(be);

  std::int64_t v0 = kValInfinity;
  if (a.st_ == Scalar::State::Value) v0 = std::min(v0, a.val_);
  if (b.st_ == Scalar::State::Value) v0 = std::min(v0, b.val_);
  if (v0 == kValInfinity || v0 >= A) {
    if (A == kValInfinity) return Scalar::zero(be);  // unreachable; defensive
    return Scalar::indeterminate(be, A);
  }
  std::int32_t W = (std::int32_t)std::min<std::int64_t>(A - v0, be.precision);
  std::uint64_t mod = upow(p, W);
  auto digits = [&](const Scalar& x, bool neg) -> std::uint64_t {
    if (x.st_ != Scalar::State::Value) return 0;
    std::int64_t sh = x.val_ - v0;
    if (sh >= W) return 0;
    std::uint64_t d = (std::uint64_t)((unsigned __int128)(x.unit_ % mod) * upow(p, (std::int32_t)sh) % mod);
    return neg ? (mod - d) % mod : d;
  };
  std::uint64_t s = (digits(a, false) + digits(b, negate_b)) % mod;
  if (s == 0) return Scalar::indeterminate(be, v0 + W);
  std::int32_t k = 0;
  while (s % p == 0) {
    s /= p;
    ++k;
  }
  Scalar r;
  r.be_ = be;
  r.st_ = Scalar::State::Value;
  r.val_ = v0 + k;
  r.prec_ = W - k;
  r.unit_ = s;
  r.canonicalize();
  return r;
}

// ---- Laurent addition/subtraction -------------------------------------------

Scalar laurent_add(const Scalar& a, const Scalar& b, bool negate_b) {
  const Backend& be = a.be_;
  const std::int32_t p = be.p;
  auto window = [&](const Scalar& x) -> std::int64_t {
    if (x.st_ == Scalar::State::Zero) return kValInfinity;
    if (x.st_ == Scalar::State::Indeterminate) return x.val_;
    if (x.prec_ == kExactPrec) return kValInfinity;
    return x.val_ + x.prec_;
  };
  std::int64_t A = std::min(window(a), window(b));
  if (a.st_ == Scalar::State::Zero && b.st_ == Scalar::State::Zero) return Scalar::zero(be);
  std::int64_t v0 = kValInfinity;
  std::int64_t hi = 0;  // one past the largest known exponent among exact supports
  if (a.st_ == Scalar::State::Value) {
    v0 = std::min(v0, a.val_);
    hi = std::max(hi, a.val_ + (std::int64_t)a.coeffs_.size());
  }
  if (b.st_ == Scalar::State::Value) {
    v0 = std::min(v0, b.val_);
    hi = std::max(hi, b.val_ + (std::int64_t)b.coeffs_.size());
  }
  if (v0 == kValInfinity || v0 >= A) {
    if (A == kValInfinity) return Scalar::zero(be);
    return Scalar::indeterminate(be, A);
  }
  bool exact = A == kValInfinity;
  std::int64_t end = exact ? hi : std::min<std::int64_t>(A, v0 + be.precision);
  std::vector<std::uint8_t> out((std::size_t)(end - v0), 0);
  auto acc = [&](const Scalar& x, bool neg) {
    if (x.st_ != Scalar::State::Value) return;
    for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
      std::int64_t e = x.val_ + (std::int64_t)i;
      if (e >= end) break;
      std::int32_t c = x.coeffs_[i];
      if (neg) c = (p - c) % p;
      std::size_t j = (std::size_t)(e - v0);
      out[j] = (std::uint8_t)((out[j] + c) % p);
    }
  };
  acc(a, false);
  acc(b, negate_b);
  bool all_zero = true;
  for (auto c : out)
    if (c) { all_zero = false; break; }
  if (all_zero) {
    if (exact) return Scalar::zero(be);
    return Scalar::indeterminate(be, end);
  }
  Scalar r;
  r.be_ = be;
  r.st_ = Scalar::State::Value;
  r.val_ = v0;
  r.coeffs_ = std::move(out);
  r.prec_ = exact ? kExactPrec : (std::int32_t)(end - v0);
  r.canonicalize();
  return r;
}

// ---- generic operators ------------------------------------------------------

Scalar operator+(const Scalar& a, const Scalar& b) {
  require_same_backend(a, b);
  if (a.be_.archimedean()) return Scalar::complex_value(a.c_ + b.c_);
  if (a.be_.kind == FieldKind::Padic) return padic_add(a, b, false);
  return laurent_add(a, b, false);
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  require_same_backend(a, b);
  if (a.be_.archimedean()) return Scalar::complex_value(a.c_ - b.c_);
  if (a.be_.kind == FieldKind::Padic) return padic_add(a, b, true);
  return laurent_add(a, b, true);
}

Scalar Scalar::operator-() const {
  if (be_.archimedean()) return complex_value(-c_);
  if (st_ != State::Value) return *this;  // -0 = 0, -indeterminate same floor
  Scalar r = *this;
  if (be_.kind == FieldKind::Padic) {
    std::uint64_t mod = upow((std::uint64_t)be_.p, prec_);
    r.unit_ = (mod - unit_ % mod) % mod;
  } else {
    for (auto& c : r.coeffs_) c = (std::uint8_t)((be_.p - c) % be_.p);
  }
  r.canonicalize();
  return r;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  require_same_backend(a, b);
  const Backend& be = a.be_;
  if (be.archimedean()) return Scalar::complex_value(a.c_ * b.c_);
  using St = Scalar::State;
  if (a.st_ == St::Zero || b.st_ == St::Zero) return Scalar::zero(be);
  if (a.st_ == St::Indeterminate || b.st_ == St::Indeterminate) {
    // val_ is the valuation for values and the absolute floor for
    // indeterminates; either way the product floor is the sum.
    return Scalar::indeterminate(be, a.val_ + b.val_);
  }
  Scalar r;
  r.be_ = be;
  r.st_ = St::Value;
  r.val_ = a.val_ + b.val_;
  if (be.kind == FieldKind::Padic) {
    r.prec_ = std::min(a.prec_, b.prec_);
    std::uint64_t mod = upow((std::uint64_t)be.p, r.prec_);
    r.unit_ = (std::uint64_t)((unsigned __int128)(a.unit_ % mod) * (b.unit_ % mod) % mod);
  } else {
    bool exact = a.prec_ == kExactPrec && b.prec_ == kExactPrec;
    std::size_t len;
    if (exact) {
      len = a.coeffs_.size() + b.coeffs_.size() - 1;
    } else {
      std::int32_t pr = std::min({a.prec_ == kExactPrec ? be.precision : a.prec_,
                                  b.prec_ == kExactPrec ? be.precision : b.prec_, be.precision});
      len = (std::size_t)pr;
      r.prec_ = pr;
    }
    std::vector<std::uint32_t> acc(len, 0);
    for (std::size_t i = 0; i < a.coeffs_.size() && i < len; ++i) {
      if (a.coeffs_[i] == 0) continue;
      std::size_t jmax = std::min(b.coeffs_.size(), len - i);
      for (std::size_t j = 0; j < jmax; ++j)
        acc[i + j] = (acc[i + j] + (std::uint32_t)a.coeffs_[i] * b.coeffs_[j]) % (std::uint32_t)be.p;
    }
    r.coeffs_.assign(acc.begin(), acc.end());
    if (exact) r.prec_ = kExactPrec;
  }
  r.canonicalize();
  return r;
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  require_same_backend(a, b);
  const Backend& be = a.be_;
  if (be.archimedean()) {
    if (b.c_ == std::complex<double>(0.0, 0.0)) throw DomainError("division by zero");
    return Scalar::complex_value(a.c_ / b.c_);
  }
  using St = Scalar::State;
  if (b.st_ == St::Zero) throw DomainError("division by zero");
  if (b.st_ == St::Indeterminate)
    throw PrecisionExhausted("division by a value indistinguishable from zero");
  if (a.st_ == St::Zero) return Scalar::zero(be);
  if (a.st_ == St::Indeterminate) return Scalar::indeterminate(be, a.val_ - b.val_);
  Scalar r;
  r.be_ = be;
  r.st_ = St::Value;
  r.val_ = a.val_ - b.val_;
  if (be.kind == FieldKind::Padic) {
    r.prec_ = std::min(a.prec_, b.prec_);
    std::uint64_t mod = upow((std::uint64_t)be.p, r.prec_);
    std::uint64_t inv = unit_inverse(b.unit_ % mod, (std::uint64_t)be.p, r.prec_);
    r.unit_ = (std::uint64_t)((unsigned __int128)(a.unit_ % mod) * inv % mod);
    r.canonicalize();
    return r;
  }
  // Laurent: dividing by a monomial is exact; otherwise invert the unit
  // series to the working precision.
  if (b.coeffs_.size() == 1 && b.prec_ == kExactPrec) {
    std::uint64_t inv = unit_inverse(b.coeffs_[0], (std::uint64_t)be.p, 1);
    r.prec_ = a.prec_;
    r.coeffs_ = a.coeffs_;
    for (auto& c : r.coeffs_) c = (std::uint8_t)(c * inv % (std::uint64_t)be.p);
    r.canonicalize();
    return r;
  }
  std::int32_t W = std::min({a.prec_ == kExactPrec ? be.precision : a.prec_,
                             b.prec_ == kExactPrec ? be.precision : b.prec_, be.precision});
  r.prec_ = W;
  std::uint64_t inv0 = unit_inverse(b.coeffs_[0], (std::uint64_t)be.p, 1);
  std::vector<std::uint8_t> q((std::size_t)W, 0);
  std::vector<std::uint32_t> rem(a.coeffs_.begin(),
                                 a.coeffs_.begin() + (std::ptrdiff_t)std::min<std::size_t>(
                                                         a.coeffs_.size(), (std::size_t)W));
  rem.resize((std::size_t)W, 0);
  for (std::int32_t i = 0; i < W; ++i) {
    std::uint32_t qi = (std::uint32_t)(rem[(std::size_t)i] * inv0 % (std::uint64_t)be.p);
    q[(std::size_t)i] = (std::uint8_t)qi;
    if (qi != 0) {
      for (std::size_t j = 0; j < b.coeffs_.size() && i + (std::int64_t)j < W; ++j) {
        auto& cell = rem[(std::size_t)(i + (std::int64_t)j)];
        cell = (cell + (std::uint32_t)be.p * (std::uint32_t)be.p - qi * b.coeffs_[j]) %
               (std::uint32_t)be.p;
      }
    }
  }
  r.coeffs_ = std::move(q);
  r.canonicalize();
  return r;
}

Scalar Scalar::pow(std::int64_t e) const {
  if (e < 0) return one(be_) / pow(-e);
  Scalar acc = one(be_);
  Scalar base = *this;
  std::uint64_t k = (std::uint64_t)e;
  while (k) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

bool Scalar::identical(const Scalar& o) const {
  if (!(be_ == o.be_) || st_ != o.st_) return false;
  if (be_.archimedean()) return c_ == o.c_;
  if (st_ != State::Value) return st_ == State::Zero || val_ == o.val_;
  return val_ == o.val_ && prec_ == o.prec_ && unit_ == o.unit_ && coeffs_ == o.coeffs_;
}

std::string Scalar::str() const {
  char buf[80];
  if (be_.archimedean()) {
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", c_.real(), c_.imag());
    return buf;
  }
  if (st_ == State::Zero) return "0";
  if (st_ == State::Indeterminate) {
    std::string u = be_.kind == FieldKind::Padic ? std::to_string(be_.p) : "t";
    return "O(" + u + "^" + std::to_string(val_) + ")";
  }
  if (be_.kind == FieldKind::Padic) {
    std::string s;
    if (val_ != 0) s = std::to_string(be_.p) + "^" + std::to_string(val_) + "*";
    return s + std::to_string(unit_);
  }
  std::string body;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!body.empty()) body += " + ";
    body += std::to_string(coeffs_[i]);
    if (i == 1) body += "*t";
    if (i > 1) body += "*t^" + std::to_string(i);
  }
  std::string s;
  if (val_ != 0) s = "t^" + std::to_string(val_) + "*";
  s += "(" + body + ")";
  if (prec_ != kExactPrec) s += " + O(t^" + std::to_string(val_ + prec_) + ")";
  return s;
}

double log_abs(const Scalar& x) {
  if (x.backend().archimedean()) return std::log(std::abs(x.complex_val()));
  std::int64_t v = x.valuation();
  if (v == kValInfinity) return kNegInf;
  return -(double)v * std::log((double)x.backend().p);
}

double vlog(const Scalar& x) {
  if (x.backend().archimedean()) throw DomainError("vlog on archimedean scalar");
  std::int64_t v = x.valuation();
  if (v == kValInfinity) return kNegInf;
  return -(double)v;
}

double abs_value(const Scalar& x) {
  if (x.backend().archimedean()) return std::abs(x.complex_val());
  double la = log_abs(x);
  return la == kNegInf ? 0.0 : std::exp(la);
}

std::optional<std::int32_t> residue(const Scalar& x) {
  if (x.backend().archimedean()) throw DomainError("residue on archimedean scalar");
  std::int64_t v = x.valuation();  // throws on indeterminate
  if (v == kValInfinity || v > 0) return 0;
  if (v < 0) return std::nullopt;
  if (x.backend().kind == FieldKind::Padic)
    return (std::int32_t)(x.unit() % (std::uint64_t)x.backend().p);
  return (std::int32_t)x.coeffs()[0];
}

}  // namespace berkdyn
