#include "berkdyn/berkovich.hpp"

#include <cmath>
#include <cstdio>

namespace berkdyn {

BerkPoint BerkPoint::classical(const ProjectivePoint& p) {
  BerkPoint b;
  b.be_ = p.backend();
  if (p.is_infinity()) {
    b.kind_ = Kind::Infinity;
    return b;
  }
  b.kind_ = Kind::Classical;
  b.pt_ = p;
  return b;
}

BerkPoint BerkPoint::classical_affine(const Scalar& z) {
  return classical(ProjectivePoint::from_affine(z));
}

BerkPoint BerkPoint::disk(const Scalar& center, double vlog_radius) {
  if (center.backend().archimedean())
    throw DomainError("disk points exist over the non-archimedean backends only");
  if (center.is_indeterminate())
    throw PrecisionExhausted("disk center indistinguishable from zero");
  if (vlog_radius == kNegInf) return classical_affine(center);
  if (std::isnan(vlog_radius) || vlog_radius == kPosInf)
    throw DomainError("disk radius must be finite or -infinity");
  BerkPoint b;
  b.be_ = center.backend();
  b.kind_ = Kind::Disk;
  b.center_ = center;
  b.vlog_radius_ = vlog_radius;
  return b;
}

BerkPoint BerkPoint::gauss(const Backend& be) { return disk(Scalar::zero(be), 0.0); }

BerkPoint BerkPoint::infinity(const Backend& be) {
  BerkPoint b;
  b.be_ = be;
  b.kind_ = Kind::Infinity;
  return b;
}

const ProjectivePoint& BerkPoint::point() const {
  if (kind_ != Kind::Classical) throw DomainError("point() on a non-classical element");
  return *pt_;
}

const Scalar& BerkPoint::center() const {
  if (kind_ != Kind::Disk) throw DomainError("center() on a non-disk element");
  return center_;
}

double BerkPoint::vlog_radius() const {
  if (kind_ != Kind::Disk) throw DomainError("vlog_radius() on a non-disk element");
  return vlog_radius_;
}

bool BerkPoint::is_type_two() const {
  if (kind_ != Kind::Disk) return false;
  return vlog_radius_ == std::floor(vlog_radius_);
}

Scalar BerkPoint::center_or_affine() const {
  if (kind_ == Kind::Disk) return center_;
  if (kind_ == Kind::Classical) return pt_->affine();
  throw DomainError("no finite center at infinity");
}

double BerkPoint::vlog_radius_or_neg_inf() const {
  return kind_ == Kind::Disk ? vlog_radius_ : kNegInf;
}

std::string BerkPoint::str() const {
  switch (kind_) {
    case Kind::Infinity: return "inf";
    case Kind::Classical: return "pt(" + pt_->affine().str() + ")";
    case Kind::Disk: {
      if (vlog_radius_ == 0.0 && center_.is_zero()) return "gauss";
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", vlog_radius_);
      return "disk(" + center_.str() + "," + buf + ")";
    }
  }
  return "?";
}

double vlog_diam(const BerkPoint& s) {
  if (s.is_infinity()) throw DomainError("diameter at infinity");
  return s.vlog_radius_or_neg_inf();
}

double diam(const BerkPoint& s) {
  double v = vlog_diam(s);
  if (v == kNegInf) return 0.0;
  return std::exp(v * std::log((double)s.backend().p));
}

BerkPoint join(const BerkPoint& s, const BerkPoint& t) {
  if (s.is_infinity() || t.is_infinity()) throw DomainError("join with infinity");
  if (s.backend().archimedean()) throw DomainError("join over the archimedean backend");
  Scalar a = s.center_or_affine();
  Scalar b = t.center_or_affine();
  double sep;
  Scalar d = a.identical(b) ? Scalar::zero(a.backend()) : a - b;
  if (d.is_zero()) {
    // Canonical representatives are unique, so identical centers separate by
    // exactly zero; subtraction alone cannot certify that over Q_p.
    sep = kNegInf;
  } else if (d.is_indeterminate()) {
    // |a - b| <= p^-floor; if that cannot exceed the radii the join is
    // already decided, otherwise precision is genuinely exhausted.
    double bound = -(double)d.abs_floor();
    double rmax = std::max(s.vlog_radius_or_neg_inf(), t.vlog_radius_or_neg_inf());
    if (bound <= rmax) {
      sep = kNegInf;
    } else {
      throw PrecisionExhausted("join separation indistinguishable at precision");
    }
  } else {
    sep = vlog(d);
  }
  double r = std::max({s.vlog_radius_or_neg_inf(), t.vlog_radius_or_neg_inf(), sep});
  return BerkPoint::disk(a, r);
}

double vlog_size(const BerkPoint& s) {
  if (s.is_infinity()) return kPosInf;
  Scalar c = s.center_or_affine();
  double vc;
  if (c.is_zero()) vc = kNegInf;
  else vc = vlog(c);
  return std::max(vc, s.vlog_radius_or_neg_inf());
}

double hsia_vlog(const BerkPoint& s, const BerkPoint& t) {
  if (s.is_infinity() && t.is_infinity()) return kNegInf;
  if (s.is_infinity()) return -std::max(0.0, vlog_size(t));
  if (t.is_infinity()) return -std::max(0.0, vlog_size(s));
  double d = vlog_diam(join(s, t));
  if (d == kNegInf) return kNegInf;
  return d - std::max(0.0, vlog_size(s)) - std::max(0.0, vlog_size(t));
}

double canonical_kernel_log(const BerkPoint& s, const BerkPoint& t) {
  if (s.backend().archimedean()) {
    if (s.is_infinity() && t.is_infinity()) return kNegInf;
    const ProjectivePoint ps =
        s.is_infinity() ? ProjectivePoint::infinity(s.backend()) : s.point();
    const ProjectivePoint pt =
        t.is_infinity() ? ProjectivePoint::infinity(t.backend()) : t.point();
    return log_chordal(ps, pt);
  }
  double v = hsia_vlog(s, t);
  if (v == kNegInf) return kNegInf;
  return v * std::log((double)s.backend().p);
}

double gauss_seminorm_vlog(const Poly& w, const Scalar& center, double vlog_radius) {
  if (w.backend().archimedean())
    throw DomainError("Gauss seminorm over the archimedean backend");
  if (w.is_zero()) return kNegInf;
  Poly shifted = center.is_zero() ? w : w.taylor_shift(center);
  if (shifted.is_zero()) return kNegInf;  // cancellation to exact zero
  double best = kNegInf;
  bool have_definite = false;
  for (const auto& tm : shifted.terms()) {
    if (tm.coeff.is_indeterminate()) continue;
    double v = tm.exp == 0 ? vlog(tm.coeff) : vlog(tm.coeff) + (double)tm.exp * vlog_radius;
    if (std::isnan(v)) continue;  // 0 * inf from zero radius against huge exponent
    if (v > best) best = v;
    have_definite = true;
  }
  for (const auto& tm : shifted.terms()) {
    if (!tm.coeff.is_indeterminate()) continue;
    double ub = -(double)tm.coeff.abs_floor() +
                (tm.exp == 0 ? 0.0 : (double)tm.exp * vlog_radius);
    if (std::isnan(ub)) continue;
    if (!have_definite || ub > best)
      throw PrecisionExhausted("seminorm dominated by an indeterminate coefficient");
  }
  if (!have_definite)
    throw PrecisionExhausted("seminorm has no definite coefficient");
  return best;
}

double gauss_seminorm_vlog(const Poly& w, const BerkPoint& s) {
  if (s.is_infinity()) throw DomainError("seminorm at infinity");
  return gauss_seminorm_vlog(w, s.center_or_affine(), s.vlog_radius_or_neg_inf());
}

}  // namespace berkdyn
