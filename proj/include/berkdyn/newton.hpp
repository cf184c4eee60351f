#pragma once

#include "berkdyn/poly.hpp"

namespace berkdyn {

// One edge of the lower Newton polygon. Exponents k_start < k_end; the edge
// carries `length` = k_end - k_start roots, each of valuation
// root_valuation = -slope.
struct NewtonSegment {
  std::int64_t k_start = 0;
  std::int64_t k_end = 0;
  Rat slope;
  Rat root_valuation;
  std::int64_t length() const { return k_end - k_start; }
};

// Lower convex hull of the points (k, v(c_k)) of a non-archimedean
// polynomial, with the mass at z = 0 (trailing exponent) and at infinity
// (formal degree drop) split off. Segment slopes are strictly increasing.
struct NewtonPolygon {
  std::vector<NewtonSegment> segments;
  std::int64_t zero_multiplicity = 0;
  std::int64_t infinity_multiplicity = 0;
  // Hull vertices (exponent, valuation), ascending exponent.
  std::vector<std::pair<std::int64_t, std::int64_t>> vertices;
  std::int64_t total_finite_nonzero_roots() const;
};

// Polygon of w with the given formal degree (pass -1 to use the effective
// degree). Indeterminate coefficients are tolerated when their precision
// floor keeps them on or above the definite hull; otherwise the polygon is
// not determined at the working precision and PrecisionExhausted is thrown.
NewtonPolygon newton_polygon(const Poly& w, std::int64_t formal_degree = -1);

// Hull height at exponent k (rational; k within the hull span).
Rat polygon_height(const NewtonPolygon& np, std::int64_t k);

}  // namespace berkdyn
