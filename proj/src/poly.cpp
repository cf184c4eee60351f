#include "berkdyn/poly.hpp"

#include <algorithm>
#include <map>

namespace berkdyn {

namespace {

// Nonzero binomial coefficients C(m, k) mod p via Lucas: k runs over digit
// vectors bounded by the base-p digits of m. Returns (k, C(m,k) mod p) pairs.
// The count is prod(digit_i + 1); caller guards against blowup.
void lucas_binomials(std::int64_t m, std::int32_t p,
                     std::vector<std::pair<std::int64_t, std::int32_t>>& out) {
  std::vector<std::int32_t> digits;
  std::int64_t mm = m;
  while (mm > 0) {
    digits.push_back((std::int32_t)(mm % p));
    mm /= p;
  }
  if (digits.empty()) digits.push_back(0);
  // Pascal rows mod p up to p-1.
  std::vector<std::vector<std::int32_t>> pascal((std::size_t)p);
  for (std::int32_t i = 0; i < p; ++i) {
    pascal[(std::size_t)i].resize((std::size_t)i + 1);
    pascal[(std::size_t)i][0] = 1;
    pascal[(std::size_t)i][(std::size_t)i] = 1;
    for (std::int32_t j = 1; j < i; ++j)
      pascal[(std::size_t)i][(std::size_t)j] =
          (pascal[(std::size_t)i - 1][(std::size_t)j - 1] +
           pascal[(std::size_t)i - 1][(std::size_t)j]) % p;
  }
  out.clear();
  out.push_back({0, 1});
  std::int64_t place = 1;
  for (std::size_t di = 0; di < digits.size(); ++di) {
    std::size_t base = out.size();
    for (std::int32_t kd = 1; kd <= digits[di]; ++kd) {
      std::int32_t binom = pascal[(std::size_t)digits[di]][(std::size_t)kd];
      for (std::size_t i = 0; i < base; ++i)
        out.push_back({out[i].first + place * kd, (std::int32_t)(out[i].second * binom % p)});
    }
    place *= p;
  }
  std::sort(out.begin(), out.end());
}

std::int64_t lucas_expansion_count(std::int64_t m, std::int32_t p) {
  std::int64_t cnt = 1;
  while (m > 0) {
    cnt *= (m % p) + 1;
    if (cnt > (1 << 22)) return cnt;
    m /= p;
  }
  return cnt;
}

}  // namespace

void Poly::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.exp < b.exp; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (t.coeff.is_zero()) continue;
    if (!out.empty() && out.back().exp == t.exp) {
      out.back().coeff += t.coeff;
      if (out.back().coeff.is_zero()) out.pop_back();
    } else {
      out.push_back(std::move(t));
    }
  }
  terms_ = std::move(out);
}

Poly Poly::from_terms(const Backend& be, std::vector<Term> terms) {
  Poly p(be);
  p.terms_ = std::move(terms);
  p.normalize();
  return p;
}

Poly Poly::constant(const Scalar& c) { return monomial(0, c); }

Poly Poly::monomial(std::int64_t exp, const Scalar& c) {
  Poly p(c.backend());
  if (!c.is_zero()) p.terms_.push_back({exp, c});
  return p;
}

Poly Poly::from_dense(const Backend& be, const std::vector<Scalar>& coeffs) {
  Poly p(be);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (!coeffs[i].is_zero()) p.terms_.push_back({(std::int64_t)i, coeffs[i]});
  return p;
}

std::int64_t Poly::degree() const {
  if (terms_.empty()) throw DomainError("degree of the zero polynomial");
  return terms_.back().exp;
}

std::int64_t Poly::low_exp() const {
  if (terms_.empty()) throw DomainError("low_exp of the zero polynomial");
  return terms_.front().exp;
}

double Poly::sparsity() const {
  if (terms_.empty()) return 1.0;
  double span = (double)(degree() + 1);
  return 1.0 - (double)terms_.size() / span;
}

Scalar Poly::coeff(std::int64_t exp) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exp,
                             [](const Term& t, std::int64_t e) { return t.exp < e; });
  if (it != terms_.end() && it->exp == exp) return it->coeff;
  return Scalar::zero(be_);
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r(a.be_);
  r.terms_.reserve(a.terms_.size() + b.terms_.size());
  r.terms_ = a.terms_;
  for (const auto& t : b.terms_) r.terms_.push_back(t);
  r.normalize();
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  // Identical coefficients cancel exactly; windowed subtraction only applies
  // to representatives that are not literally the same.
  Poly r(a.be_);
  r.terms_.reserve(a.terms_.size() + b.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms_.size() || j < b.terms_.size()) {
    if (j == b.terms_.size() ||
        (i < a.terms_.size() && a.terms_[i].exp < b.terms_[j].exp)) {
      r.terms_.push_back(a.terms_[i++]);
    } else if (i == a.terms_.size() || b.terms_[j].exp < a.terms_[i].exp) {
      r.terms_.push_back({b.terms_[j].exp, -b.terms_[j].coeff});
      ++j;
    } else {
      if (!a.terms_[i].coeff.identical(b.terms_[j].coeff)) {
        Scalar c = a.terms_[i].coeff - b.terms_[j].coeff;
        if (!c.is_zero()) r.terms_.push_back({a.terms_[i].exp, c});
      }
      ++i;
      ++j;
    }
  }
  return r;
}

Poly Poly::operator-() const {
  Poly r(be_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.exp, -t.coeff});
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r(a.be_);
  if (a.terms_.empty() || b.terms_.empty()) return r;
  const std::size_t work = a.terms_.size() * b.terms_.size();
  const std::int64_t lo = a.terms_.front().exp + b.terms_.front().exp;
  const std::int64_t hi = a.terms_.back().exp + b.terms_.back().exp;
  if (work > (1u << 18) && hi - lo <= (1 << 16)) {
    // Dense convolution when the sparse product would churn.
    std::vector<Scalar> acc((std::size_t)(hi - lo + 1), Scalar::zero(a.be_));
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_)
        acc[(std::size_t)(ta.exp + tb.exp - lo)] += ta.coeff * tb.coeff;
    for (std::size_t i = 0; i < acc.size(); ++i)
      if (!acc[i].is_zero()) r.terms_.push_back({lo + (std::int64_t)i, acc[i]});
    return r;
  }
  std::map<std::int64_t, Scalar> acc;
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) {
      Scalar prod = ta.coeff * tb.coeff;
      auto [it, fresh] = acc.try_emplace(ta.exp + tb.exp, prod);
      if (!fresh) it->second += prod;
    }
  for (auto& [e, c] : acc)
    if (!c.is_zero()) r.terms_.push_back({e, c});
  return r;
}

Poly Poly::scaled(const Scalar& c) const {
  if (c.is_zero()) return Poly(be_);
  Poly r(be_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    Scalar v = t.coeff * c;
    if (!v.is_zero()) r.terms_.push_back({t.exp, v});
  }
  return r;
}

Poly Poly::shifted_exp(std::int64_t k) const {
  Poly r(be_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.exp + k, t.coeff});
  return r;
}

Scalar Poly::eval(const Scalar& x) const {
  if (terms_.empty()) return Scalar::zero(be_);
  // Horner over exponent gaps, high to low.
  Scalar acc = Scalar::zero(be_);
  std::int64_t cur = terms_.back().exp;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (it->exp != cur) {
      acc = acc * x.pow(cur - it->exp);
      cur = it->exp;
    }
    acc += it->coeff;
  }
  if (cur > 0) acc = acc * x.pow(cur);
  return acc;
}

Poly Poly::taylor_shift(const Scalar& a, std::int64_t dense_guard) const {
  if (terms_.empty() || a.is_zero()) return *this;
  if (be_.kind == FieldKind::Laurent) {
    // Characteristic p: binomials C(m,k) live in the prime field, so Lucas
    // gives the exact expansion and sparse inputs stay sparse.
    bool feasible = true;
    for (const auto& t : terms_)
      if (lucas_expansion_count(t.exp, be_.p) > (1 << 22)) { feasible = false; break; }
    if (feasible) {
      std::vector<Term> out;
      std::vector<std::pair<std::int64_t, std::int32_t>> binoms;
      for (const auto& t : terms_) {
        lucas_binomials(t.exp, be_.p, binoms);
        for (const auto& [k, bmodp] : binoms) {
          Scalar c = t.coeff * Scalar::from_int(be_, bmodp) * a.pow(t.exp - k);
          if (!c.is_zero()) out.push_back({k, c});
        }
      }
      return from_terms(be_, std::move(out));
    }
  }
  std::int64_t d = degree();
  if (low_exp() < 0) throw DomainError("taylor_shift requires nonnegative exponents");
  if (d > dense_guard)
    throw BudgetExceeded("taylor_shift dense degree " + std::to_string(d) + " over guard");
  std::vector<Scalar> c = dense_coeffs(d);
  // Repeated synthetic division by (z - a): exact over the non-archimedean
  // backends, numerically stable over C.
  for (std::int64_t k = 0; k < d; ++k)
    for (std::int64_t j = d - 1; j >= k; --j)
      c[(std::size_t)j] += a * c[(std::size_t)j + 1];
  return from_dense(be_, c);
}

Poly Poly::derivative() const {
  Poly r(be_);
  for (const auto& t : terms_) {
    if (t.exp == 0) continue;
    Scalar m = Scalar::from_int(be_, t.exp);  // vanishes mod p in characteristic p
    if (m.is_zero()) continue;
    Scalar c = t.coeff * m;
    if (!c.is_zero()) r.terms_.push_back({t.exp - 1, c});
  }
  return r;
}

Poly Poly::pow(std::int64_t e, std::int64_t degree_budget) const {
  if (e < 0) throw DomainError("negative polynomial power");
  Poly acc = constant(Scalar::one(be_));
  Poly base = *this;
  if (!terms_.empty() && degree() > 0 && e > 0 && degree() * e > degree_budget)
    throw BudgetExceeded("polynomial power exceeds degree budget");
  while (e) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return acc;
}

std::vector<Scalar> Poly::dense_coeffs(std::int64_t upto_exp) const {
  std::vector<Scalar> out((std::size_t)upto_exp + 1, Scalar::zero(be_));
  for (const auto& t : terms_) {
    if (t.exp < 0) throw DomainError("dense_coeffs on negative exponent");
    if (t.exp <= upto_exp) out[(std::size_t)t.exp] = t.coeff;
  }
  return out;
}

}  // namespace berkdyn
