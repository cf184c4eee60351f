#include "berkdyn/polyroots.hpp"

#include <algorithm>
#include <cmath>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace berkdyn {

namespace {

constexpr double kDegreeDropTol = 1e-12;  // relative; leading coeffs below fold into infinity
constexpr double kClusterTol = 3e-8;      // relative cluster-merge distance
constexpr double kResidualTol = 1e-10;    // relative residual certification
constexpr double kStepTol = 1e-13;        // relative Aberth convergence
constexpr int kMaxSweeps = 600;

using cplx = std::complex<double>;

// p(u)/p'(u) for the monic dense polynomial a[0..n]; evaluated through the
// reversed polynomial q(v) = v^n p(1/v) when |u| > 1 so large roots do not
// overflow: p/p' = u q(v) / (n q(v) - v q'(v)) with v = 1/u.
cplx newton_ratio(const std::vector<cplx>& a, const cplx& u) {
  const std::int64_t n = static_cast<std::int64_t>(a.size()) - 1;
  if (std::abs(u) <= 1.0) {
    cplx pv = a[n], pd = 0.0;
    for (std::int64_t k = n - 1; k >= 0; --k) {
      pd = pd * u + pv;
      pv = pv * u + a[k];
    }
    if (pd == 0.0) return pv == 0.0 ? cplx(0.0) : cplx(1e300);
    return pv / pd;
  }
  const cplx v = 1.0 / u;
  cplx qv = a[0], qd = 0.0;  // q[j] = a[n-j], evaluated highest-first
  for (std::int64_t j = 1; j <= n; ++j) {
    qd = qd * v + qv;
    qv = qv * v + a[j];
  }
  const cplx den = static_cast<double>(n) * qv - v * qd;
  if (den == 0.0) return qv == 0.0 ? cplx(0.0) : cplx(1e300);
  return u * qv / den;
}

// log|p(u)| for the monic dense polynomial, overflow-safe.
double log_abs_eval(const std::vector<cplx>& a, const cplx& u) {
  const std::int64_t n = static_cast<std::int64_t>(a.size()) - 1;
  if (std::abs(u) <= 1.0) {
    cplx pv = a[n];
    for (std::int64_t k = n - 1; k >= 0; --k) pv = pv * u + a[k];
    return std::log(std::abs(pv));
  }
  const cplx v = 1.0 / u;
  cplx qv = a[0];
  for (std::int64_t j = 1; j <= n; ++j) qv = qv * v + a[j];
  return n * std::log(std::abs(u)) + std::log(std::abs(qv));
}

// log of the evaluation majorant sum_k |a_k| |u|^k, same reciprocal scaling.
double log_majorant(const std::vector<cplx>& a, const cplx& u) {
  const std::int64_t n = static_cast<std::int64_t>(a.size()) - 1;
  const double r = std::abs(u);
  if (r <= 1.0) {
    double s = std::abs(a[n]);
    for (std::int64_t k = n - 1; k >= 0; --k) s = s * r + std::abs(a[k]);
    return std::log(s);
  }
  const double v = 1.0 / r;
  double s = std::abs(a[0]);
  for (std::int64_t j = 1; j <= n; ++j) s = s * v + std::abs(a[j]);
  return n * std::log(r) + std::log(s);
}

}  // namespace

ComplexRoots complex_roots(const Poly& w, std::int64_t formal_degree, std::uint64_t seed,
                           [[maybe_unused]] bool parallel) {
  if (!w.backend().archimedean()) throw DomainError("complex_roots: complex backend only");
  if (w.is_zero()) throw DomainError("complex_roots: zero polynomial");

  const std::int64_t deg = w.degree();
  if (formal_degree < 0) formal_degree = deg;
  if (formal_degree < deg) throw DomainError("complex_roots: formal degree below actual");

  std::vector<cplx> c(deg + 1, cplx(0.0));
  double maxabs = 0.0;
  for (const auto& t : w.terms()) {
    c[t.exp] = t.coeff.complex_val();
    maxabs = std::max(maxabs, std::abs(c[t.exp]));
  }

  ComplexRoots out;
  out.infinity_multiplicity = formal_degree - deg;
  std::int64_t hi = deg;
  while (hi > 0 && std::abs(c[hi]) <= kDegreeDropTol * maxabs) {
    ++out.infinity_multiplicity;
    --hi;
  }
  std::int64_t lo = 0;
  while (lo < hi && c[lo] == 0.0) ++lo;
  const std::int64_t zero_mult = lo;

  const std::int64_t n = hi - lo;
  std::vector<cplx> roots;
  roots.reserve(n + zero_mult);
  for (std::int64_t k = 0; k < zero_mult; ++k) roots.push_back(cplx(0.0));

  if (n > 0) {
    std::vector<cplx> a(n + 1);
    for (std::int64_t k = 0; k <= n; ++k) a[k] = c[lo + k] / c[hi];

    // Initial radii from the upper convex hull of (k, log|a_k|): one radius
    // per hull segment puts starting points near each root annulus, which the
    // single Cauchy-bound circle misses badly when coefficients are large.
    std::vector<std::pair<std::int64_t, double>> mag;
    for (std::int64_t k = 0; k <= n; ++k) {
      const double m = std::abs(a[k]);
      if (m > 0.0) mag.push_back({k, std::log(m)});
    }
    std::vector<std::size_t> hull;
    for (std::size_t idx = 0; idx < mag.size(); ++idx) {
      while (hull.size() >= 2) {
        const auto& p1 = mag[hull[hull.size() - 2]];
        const auto& p2 = mag[hull[hull.size() - 1]];
        const double cross = (double)(p2.first - p1.first) * (mag[idx].second - p1.second) -
                             (p2.second - p1.second) * (double)(mag[idx].first - p1.first);
        if (cross >= 0.0) hull.pop_back();
        else break;
      }
      hull.push_back(idx);
    }

    const double tau = 6.283185307179586476925287;
    std::vector<cplx> u(n);
    std::int64_t j = 0;
    for (std::size_t hseg = 0; hseg + 1 < hull.size(); ++hseg) {
      const auto& p1 = mag[hull[hseg]];
      const auto& p2 = mag[hull[hseg + 1]];
      const std::int64_t cnt = p2.first - p1.first;
      const double r_seg = std::exp((p1.second - p2.second) / (double)cnt);
      for (std::int64_t t = 0; t < cnt; ++t, ++j) {
        const double jitter_a = uniform01(splitmix64(seed + 2 * j)) - 0.5;
        const double jitter_r = uniform01(splitmix64(seed + 2 * j + 1)) - 0.5;
        const double th = tau * ((double)j + 0.35) / n + tau * 0.61803398875 * (double)hseg +
                          0.5 * jitter_a / n;
        u[j] = (r_seg * (1.0 + 0.05 * jitter_r)) * cplx(std::cos(th), std::sin(th));
      }
    }

    std::vector<cplx> delta(n);
    std::vector<char> collide(n, 0);
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) if (parallel)
#endif
      for (std::int64_t j = 0; j < n; ++j) {
        collide[j] = 0;
        const double ru = std::abs(u[j]);
        const double cap = 0.5 * (ru + 1.0);
        const cplx outward = -cap * (ru > 0.0 ? u[j] / ru : cplx(1.0, 0.0));
        const cplx wj = newton_ratio(a, u[j]);
        if (!std::isfinite(wj.real()) || !std::isfinite(wj.imag())) {
          // p/p' overflows when u sits deep inside the root annulus; a
          // bounded radial kick replaces the unrepresentable correction.
          delta[j] = outward;
          continue;
        }
        cplx s = 0.0;
        for (std::int64_t k = 0; k < n; ++k) {
          if (k == j) continue;
          const cplx d = u[j] - u[k];
          if (std::abs(d) < 1e-300) {
            collide[j] = 1;
            continue;
          }
          s += 1.0 / d;
        }
        const cplx den = 1.0 - wj * s;
        cplx dj = den == 0.0 ? wj : wj / den;
        const double adj = std::abs(dj);
        if (!std::isfinite(adj)) dj = outward;
        else if (adj > cap) dj *= cap / adj;
        delta[j] = dj;
      }
      double scale = 1.0;
      for (std::int64_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(u[j]));
      bool collision = false;
      for (std::int64_t j = 0; j < n; ++j) collision = collision || collide[j];
      if (collision) {
        for (std::int64_t j = 0; j < n; ++j)
          u[j] += cplx(0.0, (j + 1) * 1e-12 * scale);
        continue;
      }
      double step = 0.0;
      for (std::int64_t j = 0; j < n; ++j) {
        u[j] -= delta[j];
        step = std::max(step, std::abs(delta[j]));
      }
      converged = step <= kStepTol * scale;
    }
    if (!converged) throw ComputationError("complex_roots: Aberth iteration did not converge");
    for (std::int64_t j = 0; j < n; ++j) roots.push_back(u[j]);
  }

  std::sort(roots.begin(), roots.end(), [](const cplx& x, const cplx& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });

  std::size_t i = 0;
  while (i < roots.size()) {
    std::size_t j = i + 1;
    cplx sum = roots[i];
    while (j < roots.size() &&
           std::abs(roots[j] - roots[i]) <= kClusterTol * std::max(1.0, std::abs(roots[i]))) {
      sum += roots[j];
      ++j;
    }
    RootCluster cl;
    cl.multiplicity = static_cast<std::int64_t>(j - i);
    cl.value = sum / static_cast<double>(cl.multiplicity);
    out.finite.push_back(cl);
    i = j;
  }

  // Residual certification on the original (unscaled) coefficients.
  if (hi > 0) {
    std::vector<cplx> monic(hi + 1);
    for (std::int64_t k = 0; k <= hi; ++k) monic[k] = c[k] / c[hi];
    const double log_lead = std::log(std::abs(c[hi]));
    for (const auto& cl : out.finite) {
      const double lr = log_lead + log_abs_eval(monic, cl.value);
      // Backward-stable evaluation bottoms out near n*eps times the majorant,
      // so the certifiable residual carries an explicit degree factor.
      const double bound = std::log(kResidualTol * (double)(hi + 1)) + log_lead +
                           log_majorant(monic, cl.value);
      if (!(lr <= bound))
        throw ComputationError("complex_roots: residual certification failed");
    }
  }
  return out;
}

namespace {

// Multiplicity of r as a root of the mod-p polynomial R (small coefficients).
int res_multiplicity(std::vector<std::int64_t> R, std::int64_t r, std::int64_t p) {
  int mult = 0;
  while (R.size() > 1 || (R.size() == 1 && R[0] % p == 0)) {
    // evaluate
    std::int64_t v = 0;
    for (std::size_t k = R.size(); k-- > 0;) v = (v * r + R[k]) % p;
    if (v % p != 0) break;
    // synthetic division by (u - r)
    std::vector<std::int64_t> Q(R.size() - 1);
    std::int64_t carry = 0;
    for (std::size_t k = R.size(); k-- > 1;) {
      carry = (carry * r + R[k]) % p;
      Q[k - 1] = carry;
    }
    R = std::move(Q);
    ++mult;
    if (R.empty()) break;
  }
  return mult;
}

Scalar hensel_lift(const Poly& w, const Poly& wd, Scalar z, std::int64_t target_val) {
  std::int64_t last_val = std::numeric_limits<std::int64_t>::min();
  int stall = 0;
  for (int iter = 0; iter < 200; ++iter) {
    Scalar fv = w.eval(z);
    if (fv.is_zero()) return z;
    if (fv.is_indeterminate()) return z;  // = 0 at the working precision
    Scalar fd = wd.eval(z);
    if (!fd.definite_nonzero())
      throw PrecisionExhausted("hensel: derivative lost at the working precision");
    Scalar step = fv / fd;
    if (step.is_zero()) return z;
    if (step.is_indeterminate()) {
      if (step.abs_floor() >= target_val) return z;
      throw PrecisionExhausted("hensel: correction below the working precision");
    }
    const std::int64_t sv = step.valuation();
    z = z - step;
    if (sv >= target_val) return z;
    if (sv <= last_val) {
      if (++stall > 3) throw ComputationError("hensel: lifting stalled");
    } else {
      stall = 0;
    }
    last_val = sv;
  }
  throw ComputationError("hensel: lifting did not converge");
}

}  // namespace

PadicRoots nonarch_roots(const Poly& w, std::int64_t formal_degree) {
  const NewtonPolygon np = newton_polygon(w, formal_degree);
  const Backend& be = w.backend();
  const std::int64_t p = be.p;

  PadicRoots out;
  out.zero_multiplicity = np.zero_multiplicity;
  out.infinity_multiplicity = np.infinity_multiplicity;

  const Poly wd = w.derivative();
  const Scalar pi = Scalar::uniformizer(be);

  for (const auto& seg : np.segments) {
    if (seg.root_valuation.den() != 1) {
      out.unresolved_mass += seg.length();
      continue;
    }
    const std::int64_t m = seg.root_valuation.num();
    const std::int64_t L = seg.length();

    // Residue polynomial along the edge; coefficient j sits at exponent
    // k_start + j with prescribed valuation v_line = v(k_start) - m*j.
    const std::int64_t v_start = polygon_height(np, seg.k_start).num();
    bool ambiguous = false;
    std::vector<std::int64_t> R(L + 1, 0);
    for (std::int64_t j = 0; j <= L; ++j) {
      const Scalar ck = w.coeff(seg.k_start + j);
      const std::int64_t v_line = v_start - m * j;
      if (ck.is_zero()) continue;
      if (ck.is_indeterminate()) {
        if (ck.abs_floor() <= v_line) ambiguous = true;
        continue;
      }
      if (ck.valuation() > v_line) continue;
      const Scalar unit_part = ck / pi.pow(v_line);
      const auto r = residue(unit_part);
      if (!r) throw ComputationError("nonarch_roots: residue extraction failed");
      R[j] = *r;
    }
    if (ambiguous) {
      out.unresolved_mass += L;
      continue;
    }

    std::int64_t certified = 0;
    for (std::int64_t r = 1; r < p; ++r) {
      const int mult = res_multiplicity(R, r, p);
      if (mult != 1) continue;
      Scalar z0 = pi.pow(m) * Scalar::from_int(be, r);
      Scalar root = hensel_lift(w, wd, z0, m + be.precision);
      out.simple_roots.push_back(root);
      ++certified;
    }
    out.unresolved_mass += L - certified;
  }

  std::sort(out.simple_roots.begin(), out.simple_roots.end(),
            [](const Scalar& x, const Scalar& y) {
              const std::int64_t vx = x.valuation(), vy = y.valuation();
              if (vx != vy) return vx < vy;
              return x.str() < y.str();
            });
  return out;
}

HenselRoots hensel_simple_roots(const Poly& w) {
  const Backend& be = w.backend();
  if (be.archimedean()) throw BackendMismatch("hensel_simple_roots: non-archimedean backend required");
  if (w.is_zero()) throw DomainError("hensel_simple_roots: zero polynomial");
  const std::int64_t p = be.p;

  // Integral normalization: divide out the minimum coefficient valuation.
  std::int64_t vmin = std::numeric_limits<std::int64_t>::max();
  for (const auto& t : w.terms()) {
    if (t.coeff.is_zero()) continue;
    if (t.coeff.is_indeterminate()) continue;
    vmin = std::min(vmin, t.coeff.valuation());
  }
  if (vmin == std::numeric_limits<std::int64_t>::max())
    throw PrecisionExhausted("hensel_simple_roots: no definite coefficient");
  const Scalar pi = Scalar::uniformizer(be);
  const Poly wn = w.scaled(pi.pow(-vmin));

  std::int64_t n = 0;  // effective degree
  for (const auto& t : wn.terms()) {
    if (t.coeff.definite_nonzero() || t.coeff.is_indeterminate()) n = std::max(n, t.exp);
  }
  std::vector<std::int64_t> R(static_cast<std::size_t>(n) + 1, 0);
  std::int64_t red_deg = -1;
  for (const auto& t : wn.terms()) {
    if (t.coeff.is_zero()) continue;
    if (t.coeff.is_indeterminate()) {
      if (t.coeff.abs_floor() <= 0)
        throw PrecisionExhausted("hensel_simple_roots: reduction not determined");
      continue;
    }
    if (t.coeff.valuation() > 0) continue;
    const auto r = residue(t.coeff);
    if (!r) throw ComputationError("hensel_simple_roots: residue extraction failed");
    R[static_cast<std::size_t>(t.exp)] = *r;
    red_deg = std::max(red_deg, t.exp);
  }

  HenselRoots out;
  if (red_deg < n) out.complete = false;  // roots of negative valuation exist
  const Poly wd = wn.derivative();
  for (std::int64_t r = 0; r < p; ++r) {
    const int mult = res_multiplicity(R, r, p);
    if (mult == 0) continue;
    if (mult != 1) {
      out.complete = false;
      continue;
    }
    Scalar root = hensel_lift(wn, wd, Scalar::from_int(be, r), be.precision);
    out.roots.push_back(root);
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const Scalar& x, const Scalar& y) {
    if (x.is_zero() != y.is_zero()) return x.is_zero();
    if (x.is_zero()) return false;
    const std::int64_t vx = x.valuation(), vy = y.valuation();
    if (vx != vy) return vx < vy;
    return x.str() < y.str();
  });
  return out;
}

}  // namespace berkdyn
