#include "berkdyn/rational_map.hpp"

#include <algorithm>
#include <cmath>

#include "berkdyn/polyroots.hpp"

namespace berkdyn {

HomogeneousForm::HomogeneousForm(std::int64_t formal_degree, Poly coeffs)
    : deg_(formal_degree), c_(std::move(coeffs)) {
  if (deg_ < 0) throw DomainError("homogeneous form with negative degree");
  if (!c_.is_zero()) {
    if (c_.low_exp() < 0) throw DomainError("homogeneous form with negative exponent");
    if (c_.degree() > deg_) throw DomainError("homogeneous form: coefficient degree exceeds formal degree");
  }
}

Scalar HomogeneousForm::eval(const Scalar& x, const Scalar& y) const {
  Scalar acc = Scalar::zero(backend());
  for (const auto& t : c_.terms()) {
    Scalar v = t.coeff;
    if (t.exp > 0) v = v * y.pow(t.exp);
    if (deg_ - t.exp > 0) v = v * x.pow(deg_ - t.exp);
    acc += v;
  }
  return acc;
}

HomogeneousForm operator*(const HomogeneousForm& a, const HomogeneousForm& b) {
  return HomogeneousForm(a.deg_ + b.deg_, a.c_ * b.c_);
}

HomogeneousForm operator-(const HomogeneousForm& a, const HomogeneousForm& b) {
  if (a.deg_ != b.deg_) throw DomainError("form subtraction with mismatched degrees");
  return HomogeneousForm(a.deg_, a.c_ - b.c_);
}

HomogeneousForm HomogeneousForm::scaled(const Scalar& s) const {
  return HomogeneousForm(deg_, c_.scaled(s));
}

HomogeneousForm HomogeneousForm::pow(std::int64_t e, std::int64_t degree_budget) const {
  if (e < 0) throw DomainError("form power with negative exponent");
  if (deg_ * e > degree_budget) throw BudgetExceeded("form power exceeds degree budget");
  if (e == 0) return HomogeneousForm(0, Poly::constant(Scalar::one(backend())));
  HomogeneousForm acc(0, Poly::constant(Scalar::one(backend())));
  HomogeneousForm base = *this;
  std::uint64_t k = static_cast<std::uint64_t>(e);
  while (true) {
    if (k & 1) acc = acc * base;
    k >>= 1;
    if (!k) break;
    base = base * base;
  }
  return acc;
}

HomogeneousForm HomogeneousForm::compose(const HomogeneousForm& g0, const HomogeneousForm& g1,
                                         std::int64_t degree_budget) const {
  if (g0.deg_ != g1.deg_) throw DomainError("compose: substituted forms of unequal degree");
  const std::int64_t gd = g0.deg_;
  if (deg_ > 0 && gd > 0 && deg_ > degree_budget / gd)
    throw BudgetExceeded("compose exceeds degree budget");
  Poly acc = Poly::zero(backend());
  for (const auto& t : c_.terms()) {
    HomogeneousForm piece = g0.pow(deg_ - t.exp, degree_budget) * g1.pow(t.exp, degree_budget);
    acc = acc + piece.coeffs().scaled(t.coeff);
  }
  return HomogeneousForm(deg_ * gd, acc);
}

namespace {

// Joint normalization of a lift pair: over C divide by the largest
// coefficient modulus; otherwise multiply by the uniformizer power that
// brings the smallest coefficient valuation to exactly 0. Returns the
// natural-log scale that was applied.
double normalize_pair(HomogeneousForm& f0, HomogeneousForm& f1) {
  const Backend& be = f0.backend();
  if (be.archimedean()) {
    double maxabs = 0.0;
    for (const auto* w : {&f0, &f1})
      for (const auto& t : w->coeffs().terms())
        maxabs = std::max(maxabs, std::abs(t.coeff.complex_val()));
    if (maxabs == 0.0) throw DomainError("degenerate lift: no nonzero coefficient");
    if (maxabs == 1.0) return 0.0;
    const Scalar s = Scalar::complex_value(1.0 / maxabs);
    f0 = f0.scaled(s);
    f1 = f1.scaled(s);
    return -std::log(maxabs);
  }
  std::int64_t vmin = kValInfinity;
  for (const auto* w : {&f0, &f1})
    for (const auto& t : w->coeffs().terms())
      if (!t.coeff.is_indeterminate()) vmin = std::min(vmin, t.coeff.valuation());
  if (vmin == kValInfinity)
    throw PrecisionExhausted("lift normalization: no coefficient with definite valuation");
  for (const auto* w : {&f0, &f1})
    for (const auto& t : w->coeffs().terms())
      if (t.coeff.is_indeterminate() && t.coeff.abs_floor() < vmin)
        throw PrecisionExhausted("lift normalization: indeterminate coefficient above the maximum");
  if (vmin == 0) return 0.0;
  const Scalar s = Scalar::uniformizer(be).pow(-vmin);
  f0 = f0.scaled(s);
  f1 = f1.scaled(s);
  return static_cast<double>(vmin) * std::log(static_cast<double>(be.p));
}

}  // namespace

RationalMap::RationalMap(HomogeneousForm f0, HomogeneousForm f1, double scale_log, bool skip_cert)
    : f0_(std::move(f0)), f1_(std::move(f1)), lift_scale_log_(scale_log) {
  const std::int64_t d = f0_.formal_degree();
  if (d >= 1 && !skip_cert && d <= kEagerResultantDegree) {
    Scalar r = sylvester_resultant(f0_, f1_);
    if (r.is_indeterminate())
      throw PrecisionExhausted("lift certification: resultant indeterminate at working precision");
    if (!r.definite_nonzero()) throw DomainError("degenerate lift: zero resultant");
    resultant_ = std::move(r);
  }
}

RationalMap RationalMap::from_lift(HomogeneousForm f0, HomogeneousForm f1) {
  if (!(f0.backend() == f1.backend())) throw BackendMismatch("lift pair from different backends");
  if (f0.formal_degree() != f1.formal_degree())
    throw DomainError("lift pair with mismatched degrees");
  const std::int64_t d = f0.formal_degree();
  if (d == 0) {
    if (f0.is_zero() && f1.is_zero()) throw DomainError("degenerate lift: both forms zero");
  } else if (f0.is_zero() || f1.is_zero()) {
    throw DomainError("degenerate lift: a coordinate form vanishes identically");
  }
  const double s = normalize_pair(f0, f1);
  return RationalMap(std::move(f0), std::move(f1), s, false);
}

RationalMap RationalMap::from_fraction(const Poly& num, const Poly& den,
                                       std::int64_t degree_budget) {
  if (!(num.backend() == den.backend())) throw BackendMismatch("fraction from different backends");
  if (den.is_zero()) throw DomainError("fraction with zero denominator");
  if (num.is_zero()) {
    const Backend& be = num.backend();
    return constant(ProjectivePoint::from_affine(Scalar::zero(be)));
  }
  const std::int64_t d = std::max(num.degree(), den.degree());
  if (d > degree_budget) throw BudgetExceeded("map degree exceeds budget");
  return from_lift(HomogeneousForm(d, den), HomogeneousForm(d, num));
}

RationalMap RationalMap::constant(const ProjectivePoint& value) {
  HomogeneousForm f0(0, Poly::constant(value.c0()));
  HomogeneousForm f1(0, Poly::constant(value.c1()));
  const double s = normalize_pair(f0, f1);
  return RationalMap(std::move(f0), std::move(f1), s, true);
}

RationalMap RationalMap::identity(const Backend& be) {
  HomogeneousForm f0(1, Poly::constant(Scalar::one(be)));
  HomogeneousForm f1(1, Poly::monomial(1, Scalar::one(be)));
  return RationalMap(std::move(f0), std::move(f1), 0.0, true);
}

bool RationalMap::is_polynomial() const {
  if (f0_.is_zero()) return false;  // constant infinity
  const auto& ts = f0_.coeffs().terms();
  return ts.size() == 1 && ts[0].exp == 0 && ts[0].coeff.definite_nonzero();
}

Scalar RationalMap::poly_denominator() const {
  if (!is_polynomial()) throw DomainError("poly_denominator: map is not polynomial");
  return f0_.coeffs().terms()[0].coeff;
}

double RationalMap::input_green_offset() const {
  if (degree() < 2) throw DomainError("green offset defined for degree >= 2");
  return -lift_scale_log_ / static_cast<double>(degree() - 1);
}

ProjectivePoint RationalMap::evaluate(const ProjectivePoint& p) const {
  if (!(p.backend() == backend())) throw BackendMismatch("evaluate: point from another backend");
  return ProjectivePoint(f0_.eval(p.c0(), p.c1()), f1_.eval(p.c0(), p.c1()));
}

RationalMap RationalMap::iterate(std::int64_t n, std::int64_t degree_budget) const {
  if (n < 0) throw DomainError("iterate: negative exponent");
  if (n == 0) return identity(backend());
  if (n == 1) return *this;
  const std::int64_t d = degree();
  if (d >= 2) {
    __int128 acc = 1;
    for (std::int64_t i = 0; i < n; ++i) {
      acc *= d;
      if (acc > degree_budget) throw BudgetExceeded("iterate: d^n exceeds degree budget");
    }
  }
  // Iterates inherit nondegeneracy from the base map; certification skipped.
  auto compose2 = [degree_budget](const RationalMap& outer, const RationalMap& inner) {
    HomogeneousForm h0 = outer.f0_.compose(inner.f0_, inner.f1_, degree_budget);
    HomogeneousForm h1 = outer.f1_.compose(inner.f0_, inner.f1_, degree_budget);
    const double s = normalize_pair(h0, h1);
    return RationalMap(std::move(h0), std::move(h1), s, true);
  };
  int top = 63;
  while (!((n >> top) & 1)) --top;
  RationalMap acc = *this;
  for (int b = top - 1; b >= 0; --b) {
    acc = compose2(acc, acc);
    if ((n >> b) & 1) acc = compose2(acc, *this);
  }
  return acc;
}

const Scalar& RationalMap::resultant() const {
  if (!resultant_) resultant_ = sylvester_resultant(f0_, f1_);
  return *resultant_;
}

bool RationalMap::good_reduction() const {
  if (backend().archimedean()) throw DomainError("good_reduction: non-archimedean notion");
  const Scalar& r = resultant();
  if (r.is_indeterminate())
    throw PrecisionExhausted("good_reduction: resultant indeterminate at working precision");
  if (r.is_zero()) throw DomainError("good_reduction: degenerate lift");
  return r.valuation() == 0;
}

HomogeneousForm wedge_form(const RationalMap& f, const RationalMap& g) {
  if (!(f.backend() == g.backend())) throw BackendMismatch("wedge of maps from different backends");
  return f.f0() * g.f1() - f.f1() * g.f0();
}

Scalar sylvester_resultant(const HomogeneousForm& a, const HomogeneousForm& b) {
  const Backend& be = a.backend();
  const std::int64_t m = a.formal_degree(), n = b.formal_degree();
  const std::int64_t N = m + n;
  if (N == 0) return Scalar::one(be);
  if (N > 1024) throw ComputationError("resultant: degree too large for dense elimination");

  const auto ac = a.coeffs().dense_coeffs(m);
  const auto bc = b.coeffs().dense_coeffs(n);
  std::vector<std::vector<Scalar>> M(N, std::vector<Scalar>(N, Scalar::zero(be)));
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j <= m; ++j) M[i][i + j] = ac[m - j];
  for (std::int64_t i = 0; i < m; ++i)
    for (std::int64_t j = 0; j <= n; ++j) M[n + i][i + j] = bc[n - j];

  const bool arch = be.archimedean();
  Scalar det = Scalar::one(be);
  int sign = 1;
  for (std::int64_t col = 0; col < N; ++col) {
    std::int64_t best = -1;
    for (std::int64_t r = col; r < N; ++r) {
      const Scalar& e = M[r][col];
      if (!e.definite_nonzero()) continue;
      if (best < 0) {
        best = r;
        continue;
      }
      if (arch) {
        if (std::abs(e.complex_val()) > std::abs(M[best][col].complex_val())) best = r;
      } else {
        if (e.valuation() < M[best][col].valuation()) best = r;
      }
    }
    if (best < 0) {
      bool indet = false;
      for (std::int64_t r = col; r < N; ++r) indet = indet || M[r][col].is_indeterminate();
      if (indet)
        throw PrecisionExhausted("resultant: pivot column indeterminate at working precision");
      return Scalar::zero(be);
    }
    if (!arch) {
      const std::int64_t pv = M[best][col].valuation();
      for (std::int64_t r = col; r < N; ++r)
        if (M[r][col].is_indeterminate() && M[r][col].abs_floor() < pv)
          throw PrecisionExhausted("resultant: indeterminate entry could dominate the pivot");
    }
    if (best != col) {
      std::swap(M[best], M[col]);
      sign = -sign;
    }
    const Scalar pivot = M[col][col];
    det = det * pivot;
    for (std::int64_t r = col + 1; r < N; ++r) {
      if (M[r][col].is_zero()) continue;
      const Scalar factor = M[r][col] / pivot;
      for (std::int64_t cc = col; cc < N; ++cc)
        M[r][cc] = M[r][cc] - factor * M[col][cc];
    }
  }
  return sign < 0 ? -det : det;
}

namespace {

// Effective extremal exponents with zero-detection: relative 1e-8 threshold
// over C, definite-value scan otherwise (leading/trailing indeterminates are
// vanishing at the working precision).
std::int64_t effective_top_exp(const Poly& w) {
  if (w.backend().archimedean()) {
    double maxabs = 0.0;
    for (const auto& t : w.terms()) maxabs = std::max(maxabs, std::abs(t.coeff.complex_val()));
    std::int64_t top = -1;
    for (const auto& t : w.terms())
      if (std::abs(t.coeff.complex_val()) > 1e-8 * maxabs) top = std::max(top, t.exp);
    if (top < 0) throw ComputationError("vanishing-order scan: polynomial numerically zero");
    return top;
  }
  std::int64_t top = -1;
  for (const auto& t : w.terms())
    if (t.coeff.definite_nonzero()) top = std::max(top, t.exp);
  if (top < 0)
    throw PrecisionExhausted("vanishing-order scan: no definite coefficient");
  return top;
}

std::int64_t effective_low_exp(const Poly& w) {
  if (w.backend().archimedean()) {
    double maxabs = 0.0;
    for (const auto& t : w.terms()) maxabs = std::max(maxabs, std::abs(t.coeff.complex_val()));
    for (const auto& t : w.terms())
      if (std::abs(t.coeff.complex_val()) > 1e-8 * maxabs) return t.exp;
    throw ComputationError("vanishing-order scan: polynomial numerically zero");
  }
  for (const auto& t : w.terms())
    if (t.coeff.definite_nonzero()) return t.exp;
  throw PrecisionExhausted("vanishing-order scan: no definite coefficient");
}

}  // namespace

std::int64_t local_degree(const RationalMap& f, const ProjectivePoint& z) {
  const std::int64_t d = f.degree();
  if (d < 1) throw DomainError("local_degree: constant map");
  const ProjectivePoint target = f.evaluate(z);
  const HomogeneousForm W = wedge_form(f, RationalMap::constant(target));
  const Poly& w = W.dehomogenized();
  if (w.is_zero()) throw ComputationError("local_degree: wedge vanished identically");
  if (z.is_infinity()) return d - effective_top_exp(w);
  const Poly shifted = w.taylor_shift(z.affine());
  return effective_low_exp(shifted);
}

namespace {

bool same_point(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.backend().archimedean()) return chordal(p, q) <= 1e-8;
  const Scalar w = wedge(p, q);
  return !w.definite_nonzero();  // equal, or indistinguishable at precision
}

struct CandidateList {
  std::vector<ProjectivePoint> pts;
  bool complete = true;
};

CandidateList wedge_root_points(const HomogeneousForm& W) {
  const Backend& be = W.backend();
  CandidateList out;
  if (be.archimedean()) {
    const ComplexRoots roots = complex_roots(W.dehomogenized(), W.formal_degree());
    for (const auto& cl : roots.finite)
      out.pts.push_back(ProjectivePoint::from_affine(Scalar::complex_value(cl.value)));
    if (roots.infinity_multiplicity > 0) out.pts.push_back(ProjectivePoint::infinity(be));
    return out;
  }
  const PadicRoots roots = nonarch_roots(W.dehomogenized(), W.formal_degree());
  if (roots.zero_multiplicity > 0)
    out.pts.push_back(ProjectivePoint::from_affine(Scalar::zero(be)));
  for (const auto& r : roots.simple_roots) out.pts.push_back(ProjectivePoint::from_affine(r));
  if (roots.infinity_multiplicity > 0) out.pts.push_back(ProjectivePoint::infinity(be));
  out.complete = roots.unresolved_mass == 0;
  return out;
}

}  // namespace

ExceptionalSet exceptional_set(const RationalMap& f) {
  const std::int64_t d = f.degree();
  if (d < 2) throw DomainError("exceptional_set: degree >= 2 required");

  ExceptionalSet out;
  const RationalMap id = RationalMap::identity(f.backend());
  std::vector<ProjectivePoint> used;
  auto mark_used = [&](const ProjectivePoint& p) { used.push_back(p); };
  auto is_used = [&](const ProjectivePoint& p) {
    for (const auto& q : used)
      if (same_point(p, q)) return true;
    return false;
  };

  const CandidateList fixed = wedge_root_points(wedge_form(f, id));
  out.complete = out.complete && fixed.complete;
  for (const auto& z : fixed.pts) {
    if (is_used(z)) continue;
    if (local_degree(f, z) == d) {
      out.cycles.push_back({z});
      mark_used(z);
    }
  }

  const RationalMap f2 = f.iterate(2);
  const CandidateList per2 = wedge_root_points(wedge_form(f2, id));
  out.complete = out.complete && per2.complete;
  for (const auto& z : per2.pts) {
    if (is_used(z)) continue;
    const ProjectivePoint y = f.evaluate(z);
    if (same_point(y, z)) continue;  // fixed point, already handled
    if (is_used(y)) continue;
    if (local_degree(f, z) == d && local_degree(f, y) == d) {
      out.cycles.push_back({z, y});
      mark_used(z);
      mark_used(y);
    }
  }

  std::size_t total = 0;
  for (const auto& c : out.cycles) total += c.size();
  if (total > 2)
    throw ComputationError("exceptional_set: more than two certified points (tolerance failure)");
  return out;
}

BerkPoint disk_image(const RationalMap& f, const BerkPoint& s) {
  if (f.backend().archimedean()) throw DomainError("disk_image: non-archimedean only");
  if (s.kind() != BerkPoint::Kind::Disk) throw DomainError("disk_image: disk argument required");
  if (!f.is_polynomial()) throw DomainError("disk_image: polynomial map required");
  const Poly affine = f.f1().dehomogenized().scaled(Scalar::one(f.backend()) / f.poly_denominator());
  const Poly shifted = affine.taylor_shift(s.center());
  const Scalar c0 = shifted.coeff(0);
  if (c0.is_indeterminate())
    throw PrecisionExhausted("disk_image: image center indeterminate at working precision");

  const double rho = s.vlog_radius();
  double vr = kNegInf;
  for (const auto& t : shifted.terms()) {
    if (t.exp == 0 || t.coeff.is_indeterminate()) continue;
    vr = std::max(vr, vlog(t.coeff) + static_cast<double>(t.exp) * rho);
  }
  for (const auto& t : shifted.terms()) {
    if (t.exp == 0 || !t.coeff.is_indeterminate()) continue;
    const double ub = -static_cast<double>(t.coeff.abs_floor()) + static_cast<double>(t.exp) * rho;
    if (ub > vr)
      throw PrecisionExhausted("disk_image: indeterminate coefficient could widen the image");
  }
  return BerkPoint::disk(c0, vr);
}

}  // namespace berkdyn
