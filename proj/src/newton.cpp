#include "berkdyn/newton.hpp"

#include <algorithm>

namespace berkdyn {

namespace {

struct HullPoint {
  std::int64_t k;
  std::int64_t v;
};

// cross(o->a, o->b) <= 0 means a is not strictly below the segment o->b.
__int128 cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
  return static_cast<__int128>(a.k - o.k) * (b.v - o.v) -
         static_cast<__int128>(a.v - o.v) * (b.k - o.k);
}

}  // namespace

std::int64_t NewtonPolygon::total_finite_nonzero_roots() const {
  std::int64_t n = 0;
  for (const auto& s : segments) n += s.length();
  return n;
}

NewtonPolygon newton_polygon(const Poly& w, std::int64_t formal_degree) {
  if (w.backend().archimedean())
    throw DomainError("newton_polygon: non-archimedean backends only");
  if (w.is_zero()) throw DomainError("newton_polygon: zero polynomial");

  std::vector<HullPoint> pts;
  std::vector<std::pair<std::int64_t, std::int64_t>> floors;  // (k, floor) indeterminate
  for (const auto& t : w.terms()) {
    if (t.coeff.is_indeterminate())
      floors.push_back({t.exp, t.coeff.abs_floor()});
    else
      pts.push_back({t.exp, t.coeff.valuation()});
  }
  if (pts.empty())
    throw PrecisionExhausted("newton_polygon: no coefficient has a definite valuation");

  const std::int64_t k_lo = pts.front().k;
  const std::int64_t k_hi = pts.back().k;
  for (const auto& [k, f] : floors) {
    if (k < k_lo || k > k_hi)
      throw PrecisionExhausted(
          "newton_polygon: indeterminate coefficient outside the definite support");
  }
  std::int64_t fd = formal_degree < 0 ? w.degree() : formal_degree;
  if (fd < k_hi) throw DomainError("newton_polygon: formal degree below the actual degree");

  NewtonPolygon np;
  np.zero_multiplicity = k_lo;
  np.infinity_multiplicity = fd - k_hi;

  // Lower hull, ascending exponent (monotone chain).
  std::vector<HullPoint> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0)
      hull.pop_back();
    hull.push_back(p);
  }
  for (const auto& h : hull) np.vertices.push_back({h.k, h.v});

  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    NewtonSegment seg;
    seg.k_start = hull[i].k;
    seg.k_end = hull[i + 1].k;
    seg.slope = Rat(hull[i + 1].v - hull[i].v, hull[i + 1].k - hull[i].k);
    seg.root_valuation = -seg.slope;
    np.segments.push_back(seg);
  }

  // An indeterminate coefficient is harmless iff its floor is on or above
  // the hull: then every value it could take leaves the hull unchanged.
  for (const auto& [k, f] : floors) {
    if (Rat(f) < polygon_height(np, k))
      throw PrecisionExhausted("newton_polygon: coefficient precision below the hull");
  }
  return np;
}

Rat polygon_height(const NewtonPolygon& np, std::int64_t k) {
  if (np.vertices.empty()) throw DomainError("polygon_height: empty polygon");
  if (k < np.vertices.front().first || k > np.vertices.back().first)
    throw DomainError("polygon_height: exponent outside the hull span");
  for (std::size_t i = 0; i + 1 < np.vertices.size(); ++i) {
    const auto [ka, va] = np.vertices[i];
    const auto [kb, vb] = np.vertices[i + 1];
    if (k >= ka && k <= kb)
      return Rat(va) + Rat(vb - va, kb - ka) * Rat(k - ka);
  }
  return Rat(np.vertices.back().second);
}

}  // namespace berkdyn
