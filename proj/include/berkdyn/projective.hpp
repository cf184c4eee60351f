#pragma once

#include "berkdyn/scalar.hpp"

namespace berkdyn {

// A point of P^1 as a normalized homogeneous coordinate pair (a : b), with
// the affine chart z = b / a and infinity = (0 : 1). Normalization at
// construction: unit Euclidean norm over C, unit max-norm over the
// non-archimedean backends (one coordinate becomes exactly 1, keeping later
// arithmetic exact there).
class ProjectivePoint {
 public:
  ProjectivePoint(Scalar a, Scalar b);
  static ProjectivePoint from_affine(const Scalar& z);
  static ProjectivePoint infinity(const Backend& be);

  const Backend& backend() const { return a_.backend(); }
  const Scalar& c0() const { return a_; }
  const Scalar& c1() const { return b_; }
  bool is_infinity() const { return a_.is_zero(); }
  Scalar affine() const;  // DomainError at infinity

  std::string str() const;  // "z=<scalar>" or "inf"

 private:
  Scalar a_, b_;
};

// a0*b1 - a1*b0 on the stored (normalized) representatives.
Scalar wedge(const ProjectivePoint& p, const ProjectivePoint& q);

// Chordal distance |p ^ q| / (||p|| ||q||) in [0, 1].
double chordal(const ProjectivePoint& p, const ProjectivePoint& q);
// log of the chordal distance (natural log; -infinity at coincidence).
double log_chordal(const ProjectivePoint& p, const ProjectivePoint& q);
// log_p of the chordal distance, exact for classical non-archimedean points.
double vlog_chordal(const ProjectivePoint& p, const ProjectivePoint& q);

}  // namespace berkdyn
