#pragma once

#include "berkdyn/poly.hpp"
#include "berkdyn/projective.hpp"

namespace berkdyn {

// A point of the Berkovich projective line over a non-archimedean backend:
// classical points (type I), closed disks B(center, radius) standing for the
// type II/III seminorms |.|_{B}, and the point at infinity. Type IV points
// are out of scope. Over C only classical points and infinity exist.
//
// Disk radii are carried in log_p form ("vlog"): a disk stores
// vlog_radius = log_p(radius), so the Gauss point is disk(0, 0) and
// B(0, |t|^m) is disk(0, -m). A radius of -infinity collapses to the
// classical center at construction. A disk is type II when its radius lies
// in the value group p^Z of the base field, type III otherwise.
class BerkPoint {
 public:
  enum class Kind : std::uint8_t { Classical, Disk, Infinity };

  static BerkPoint classical(const ProjectivePoint& p);
  static BerkPoint classical_affine(const Scalar& z);
  static BerkPoint disk(const Scalar& center, double vlog_radius);
  static BerkPoint gauss(const Backend& be);
  static BerkPoint infinity(const Backend& be);

  Kind kind() const { return kind_; }
  const Backend& backend() const { return be_; }
  bool is_infinity() const { return kind_ == Kind::Infinity; }
  const ProjectivePoint& point() const;   // Classical only
  const Scalar& center() const;           // Disk only
  double vlog_radius() const;             // Disk only
  bool is_type_two() const;               // Disk with radius in the value group

  // Center as a scalar for Classical (affine) or Disk points; throws at
  // infinity. Radius in vlog form, -infinity for Classical.
  Scalar center_or_affine() const;
  double vlog_radius_or_neg_inf() const;

  std::string str() const;  // pt(...), disk(...,...), gauss, inf

 private:
  BerkPoint() = default;
  Kind kind_ = Kind::Infinity;
  Backend be_{};
  std::optional<ProjectivePoint> pt_;
  Scalar center_;
  double vlog_radius_ = kNegInf;
};

// Diameter in vlog form: the disk radius, -infinity for classical points.
// DomainError at infinity.
double vlog_diam(const BerkPoint& s);
double diam(const BerkPoint& s);  // linear form

// Smallest disk containing both arguments (infinity excluded):
// join(B(a,r), B(b,s)) = B(a, max(r, s, |a-b|)).
BerkPoint join(const BerkPoint& s, const BerkPoint& t);

// vlog of |S| := diam(S join 0), the natural extension of |z| to disks;
// +infinity at the infinity point.
double vlog_size(const BerkPoint& s);

// Generalized Hsia kernel in vlog form:
//   [S,T] = diam(S join T) / (max(1,|S|) max(1,|T|)),
//   [S,inf] = 1 / max(1,|S|),   [inf,inf] = 0.
// Returns log_p of the kernel (-infinity at classical coincidence and at
// [inf,inf]).
double hsia_vlog(const BerkPoint& s, const BerkPoint& t);

// Natural-log kernel, defined for every backend: over C this is the log
// chordal distance of classical points, over the non-archimedean backends it
// is hsia_vlog * log(p). This is the kernel the potential theory runs on.
double canonical_kernel_log(const BerkPoint& s, const BerkPoint& t);

// Seminorm of an affine polynomial at a disk, in vlog form:
//   log_p max_k |c_k| r^k  after recentering w at the disk center.
// Classical points are the radius-0 case (plain evaluation). Returns
// -infinity for the zero polynomial. Throws PrecisionExhausted when an
// indeterminate coefficient could change the maximum.
double gauss_seminorm_vlog(const Poly& w, const BerkPoint& s);
// Raw-form variant, without BerkPoint construction (used for classical
// points treated as radius -infinity disks).
double gauss_seminorm_vlog(const Poly& w, const Scalar& center, double vlog_radius);

}  // namespace berkdyn
