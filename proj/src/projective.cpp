#include "berkdyn/projective.hpp"

#include <cmath>

namespace berkdyn {

ProjectivePoint::ProjectivePoint(Scalar a, Scalar b) : a_(std::move(a)), b_(std::move(b)) {
  require_same_backend(a_, b_);
  const Backend& be = a_.backend();
  if (a_.is_zero() && b_.is_zero()) throw DomainError("(0 : 0) is not a projective point");
  if (be.archimedean()) {
    double na = std::abs(a_.complex_val()), nb = std::abs(b_.complex_val());
    double norm = std::hypot(na, nb);
    a_ = Scalar::complex_value(a_.complex_val() / norm);
    b_ = Scalar::complex_value(b_.complex_val() / norm);
    return;
  }
  // Non-archimedean: certify which coordinate has maximal absolute value.
  auto defv = [](const Scalar& x) { return !x.is_zero() && !x.is_indeterminate(); };
  std::int64_t va = defv(a_) ? a_.valuation() : kValInfinity;
  std::int64_t vb = defv(b_) ? b_.valuation() : kValInfinity;
  std::int64_t fa = a_.is_indeterminate() ? a_.abs_floor() : kValInfinity;
  std::int64_t fb = b_.is_indeterminate() ? b_.abs_floor() : kValInfinity;
  if (!defv(a_) && !defv(b_))
    throw PrecisionExhausted("projective normalization lost both coordinates");
  int pick;
  if (defv(a_) && defv(b_)) {
    if (va < vb) pick = 0;
    else if (vb < va) pick = 1;
    else {
      // Tie: prefer exact (monomial) division for the Laurent backend.
      auto simple = [&](const Scalar& x) {
        return x.backend().kind != FieldKind::Laurent || x.exact() || x.coeffs().size() == 1;
      };
      pick = (!simple(a_) && simple(b_)) ? 1 : 0;
    }
  } else if (defv(a_)) {
    if (va >= fb)
      throw PrecisionExhausted("projective normalization cannot rank coordinates at precision");
    pick = 0;
  } else {
    if (vb >= fa)
      throw PrecisionExhausted("projective normalization cannot rank coordinates at precision");
    pick = 1;
  }
  const Scalar div = pick == 0 ? a_ : b_;
  a_ = a_ / div;
  b_ = b_ / div;
}

ProjectivePoint ProjectivePoint::from_affine(const Scalar& z) {
  return ProjectivePoint(Scalar::one(z.backend()), z);
}

ProjectivePoint ProjectivePoint::infinity(const Backend& be) {
  return ProjectivePoint(Scalar::zero(be), Scalar::one(be));
}

Scalar ProjectivePoint::affine() const {
  if (is_infinity()) throw DomainError("affine coordinate of infinity");
  return b_ / a_;
}

std::string ProjectivePoint::str() const {
  if (is_infinity()) return "inf";
  return "z=" + affine().str();
}

Scalar wedge(const ProjectivePoint& p, const ProjectivePoint& q) {
  return p.c0() * q.c1() - p.c1() * q.c0();
}

// Canonical lifts are unique per point, so coordinate-wise identity decides
// coincidence; p-adic cancellation in the wedge never reaches an exact zero.
static bool coincident(const ProjectivePoint& p, const ProjectivePoint& q) {
  return p.c0().identical(q.c0()) && p.c1().identical(q.c1());
}

double chordal(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.backend().archimedean()) {
    Scalar w = wedge(p, q);
    double np = std::hypot(std::abs(p.c0().complex_val()), std::abs(p.c1().complex_val()));
    double nq = std::hypot(std::abs(q.c0().complex_val()), std::abs(q.c1().complex_val()));
    return std::abs(w.complex_val()) / (np * nq);
  }
  if (coincident(p, q)) return 0.0;
  Scalar w = wedge(p, q);
  if (w.is_indeterminate())
    throw PrecisionExhausted("chordal distance below the p-adic precision window");
  return abs_value(w);  // max-norms are exactly 1 after normalization
}

double log_chordal(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.backend().archimedean()) {
    double c = chordal(p, q);
    return c == 0.0 ? kNegInf : std::log(c);
  }
  return vlog_chordal(p, q) * std::log((double)p.backend().p);
}

double vlog_chordal(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.backend().archimedean()) throw DomainError("vlog_chordal on archimedean backend");
  if (coincident(p, q)) return kNegInf;
  Scalar w = wedge(p, q);
  if (w.is_indeterminate())
    throw PrecisionExhausted("chordal distance below the p-adic precision window");
  return vlog(w);
}

}  // namespace berkdyn
