#include "convgeom/polygon2d.hpp"

#include <algorithm>

namespace convgeom {

double ConvexPolygon::area() const {
  if (empty()) return 0.0;
  Vec2 c(0, 0);
  for (const auto& p : v) c += p;
  c /= static_cast<double>(v.size());
  std::vector<double> terms(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    terms[i] = 0.5 * cross2(v[i] - c, v[(i + 1) % v.size()] - c);
  return pairwise_sum(terms);
}

double ConvexPolygon::support(const Vec2& dir) const {
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& p : v) h = std::max(h, p.dot(dir));
  return h;
}

ConvexPolygon clip_halfplane(const ConvexPolygon& poly, const Vec2& n, double c) {
  ConvexPolygon out;
  std::size_t m = poly.v.size();
  if (m == 0) return out;
  out.v.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& a = poly.v[i];
    const Vec2& b = poly.v[(i + 1) % m];
    double da = n.dot(a) - c;
    double db = n.dot(b) - c;
    if (da <= 0) out.v.push_back(a);
    if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
      double t = da / (da - db);
      out.v.push_back(a + t * (b - a));
    }
  }
  if (out.v.size() < 3) out.v.clear();
  return out;
}

ConvexPolygon intersect_convex(const ConvexPolygon& subject, const ConvexPolygon& clip) {
  ConvexPolygon out = subject;
  std::size_t m = clip.v.size();
  if (subject.empty() || clip.empty()) return ConvexPolygon{};
  for (std::size_t i = 0; i < m && !out.empty(); ++i) {
    const Vec2& a = clip.v[i];
    const Vec2& b = clip.v[(i + 1) % m];
    Vec2 e = b - a;
    Vec2 n(e.y(), -e.x());  // outward for ccw clip polygon
    out = clip_halfplane(out, n, n.dot(a));
  }
  return out;
}

}  // namespace convgeom
