#include "berkdyn/ffpoly.hpp"

#include <algorithm>

namespace berkdyn {

namespace {

std::int32_t inv_mod(std::int32_t a, std::int32_t p) {
  // Fermat; p prime, a nonzero mod p.
  std::int64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::int32_t>(r);
}

constexpr std::int64_t kFFDegreeGuard = 1 << 13;

}  // namespace

FFPoly::FFPoly(std::int32_t p, std::vector<std::int32_t> coeffs)
    : p_(p), c_(std::move(coeffs)) {
  if (p_ < 2 || p_ > 97) throw DomainError("FFPoly: prime out of supported range");
  normalize();
}

void FFPoly::normalize() {
  for (auto& x : c_) {
    x %= p_;
    if (x < 0) x += p_;
  }
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
  if (static_cast<std::int64_t>(c_.size()) > kFFDegreeGuard)
    throw BudgetExceeded("FFPoly: degree beyond supported residue-computation size");
}

FFPoly FFPoly::monomial(std::int32_t p, std::int64_t exp, std::int32_t c) {
  if (exp < 0) throw DomainError("FFPoly: negative exponent");
  std::vector<std::int32_t> v(static_cast<std::size_t>(exp) + 1, 0);
  v.back() = c;
  return FFPoly(p, std::move(v));
}

std::int32_t FFPoly::lead() const {
  if (c_.empty()) throw DomainError("FFPoly: leading coefficient of zero");
  return c_.back();
}

std::int32_t FFPoly::eval(std::int32_t x) const {
  std::int64_t v = 0;
  for (std::size_t k = c_.size(); k-- > 0;) v = (v * x + c_[k]) % p_;
  return static_cast<std::int32_t>(v);
}

FFPoly FFPoly::monic() const {
  if (c_.empty() || c_.back() == 1) return *this;
  const std::int32_t inv = inv_mod(c_.back(), p_);
  std::vector<std::int32_t> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i)
    v[i] = static_cast<std::int32_t>(static_cast<std::int64_t>(c_[i]) * inv % p_);
  return FFPoly(p_, std::move(v));
}

FFPoly FFPoly::derivative() const {
  if (c_.size() <= 1) return zero(p_);
  std::vector<std::int32_t> v(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i)
    v[i - 1] = static_cast<std::int32_t>(static_cast<std::int64_t>(c_[i]) * (i % p_) % p_);
  return FFPoly(p_, std::move(v));
}

FFPoly FFPoly::pth_root() const {
  // Over F_p the Frobenius fixes coefficients, so the root of g(x^p) just
  // collects every p-th coefficient.
  std::vector<std::int32_t> v;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (i % static_cast<std::size_t>(p_) != 0)
      throw DomainError("FFPoly: pth_root of a polynomial not in F_p[x^p]");
  }
  v.resize(c_.size() / static_cast<std::size_t>(p_) + 1, 0);
  for (std::size_t i = 0; i < c_.size(); i += static_cast<std::size_t>(p_))
    v[i / static_cast<std::size_t>(p_)] = c_[i];
  return FFPoly(p_, std::move(v));
}

FFPoly operator+(const FFPoly& a, const FFPoly& b) {
  if (a.p_ != b.p_) throw BackendMismatch("FFPoly: mixed primes");
  std::vector<std::int32_t> v(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] = (v[i] + b.c_[i]) % a.p_;
  return FFPoly(a.p_, std::move(v));
}

FFPoly operator-(const FFPoly& a, const FFPoly& b) {
  if (a.p_ != b.p_) throw BackendMismatch("FFPoly: mixed primes");
  std::vector<std::int32_t> v(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] = (v[i] - b.c_[i] + a.p_) % a.p_;
  return FFPoly(a.p_, std::move(v));
}

FFPoly operator*(const FFPoly& a, const FFPoly& b) {
  if (a.p_ != b.p_) throw BackendMismatch("FFPoly: mixed primes");
  if (a.c_.empty() || b.c_.empty()) return FFPoly::zero(a.p_);
  std::vector<std::int64_t> acc(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j)
      acc[i + j] = (acc[i + j] + static_cast<std::int64_t>(a.c_[i]) * b.c_[j]) % a.p_;
  }
  std::vector<std::int32_t> v(acc.begin(), acc.end());
  return FFPoly(a.p_, std::move(v));
}

std::pair<FFPoly, FFPoly> FFPoly::divmod(const FFPoly& a, const FFPoly& b) {
  if (a.p_ != b.p_) throw BackendMismatch("FFPoly: mixed primes");
  if (b.is_zero()) throw DomainError("FFPoly: division by zero");
  const std::int32_t p = a.p_;
  if (a.degree() < b.degree()) return {zero(p), a};
  std::vector<std::int32_t> rem = a.c_;
  std::vector<std::int32_t> quot(a.c_.size() - b.c_.size() + 1, 0);
  const std::int32_t linv = inv_mod(b.c_.back(), p);
  for (std::size_t k = rem.size(); k-- >= b.c_.size() && k < rem.size();) {
    const std::int32_t q =
        static_cast<std::int32_t>(static_cast<std::int64_t>(rem[k]) * linv % p);
    if (q != 0) {
      quot[k - (b.c_.size() - 1)] = q;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        auto& cell = rem[k - (b.c_.size() - 1) + j];
        cell = static_cast<std::int32_t>(
            ((cell - static_cast<std::int64_t>(q) * b.c_[j]) % p + p) % p);
      }
    }
    if (k == 0) break;
  }
  return {FFPoly(p, std::move(quot)), FFPoly(p, std::move(rem))};
}

FFPoly operator%(const FFPoly& a, const FFPoly& b) { return FFPoly::divmod(a, b).second; }
FFPoly operator/(const FFPoly& a, const FFPoly& b) { return FFPoly::divmod(a, b).first; }

std::string FFPoly::str() const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!s.empty()) s += " + ";
    if (i == 0 || c_[i] != 1) s += std::to_string(c_[i]);
    if (i > 0) {
      if (c_[i] != 1) s += "*";
      s += "x";
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

FFPoly ff_gcd(FFPoly a, FFPoly b) {
  while (!b.is_zero()) {
    FFPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

FFPoly ff_pow_mod(const FFPoly& base, std::int64_t e, const FFPoly& mod) {
  if (e < 0) throw DomainError("FFPoly: negative exponent");
  FFPoly acc = FFPoly::one(base.p());
  FFPoly b = base % mod;
  while (e) {
    if (e & 1) acc = (acc * b) % mod;
    b = (b * b) % mod;
    e >>= 1;
  }
  return acc;
}

std::vector<FFFactor> squarefree_decomposition(const FFPoly& f_in) {
  if (f_in.is_zero()) throw DomainError("squarefree decomposition of zero");
  std::vector<FFFactor> out;
  const std::int32_t p = f_in.p();
  FFPoly f = f_in.monic();
  if (f.degree() == 0) return out;

  const FFPoly fp = f.derivative();
  if (fp.is_zero()) {
    for (auto& [fac, mult] : squarefree_decomposition(f.pth_root()))
      out.push_back({fac, mult * p});
    return out;
  }

  FFPoly t = ff_gcd(f, fp);
  FFPoly w = f / t;
  std::int64_t i = 1;
  while (!w.is_one()) {
    const FFPoly y = ff_gcd(w, t);
    const FFPoly z = w / y;
    if (!z.is_one()) out.push_back({z.monic(), i});
    w = y;
    t = t / y;
    ++i;
  }
  if (!t.is_one()) {
    for (auto& [fac, mult] : squarefree_decomposition(t.pth_root()))
      out.push_back({fac, mult * p});
  }
  std::sort(out.begin(), out.end(),
            [](const FFFactor& x, const FFFactor& y) { return x.multiplicity < y.multiplicity; });
  return out;
}

std::vector<FFDegreeBlock> distinct_degree_factorization(const FFPoly& f_in) {
  if (f_in.is_zero() || f_in.degree() < 1)
    throw DomainError("distinct-degree factorization needs positive degree");
  const std::int32_t p = f_in.p();
  FFPoly rest = f_in.monic();
  const FFPoly x = FFPoly::monomial(p, 1, 1);
  FFPoly h = x % rest;  // x^{p^i} mod rest, advanced each round
  std::vector<FFDegreeBlock> out;
  std::int64_t i = 1;
  while (rest.degree() >= 2 * i) {
    h = ff_pow_mod(h, p, rest);
    const FFPoly g = ff_gcd(h - x, rest);
    if (!g.is_one()) {
      out.push_back({g, i, g.degree() / i});
      rest = rest / g;
      h = h % rest;
    }
    ++i;
  }
  if (rest.degree() > 0) out.push_back({rest, rest.degree(), 1});
  return out;
}

}  // namespace berkdyn
