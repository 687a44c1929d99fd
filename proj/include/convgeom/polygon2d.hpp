#ifndef CONVGEOM_POLYGON2D_HPP
#define CONVGEOM_POLYGON2D_HPP

#include <vector>

#include "convgeom/geom.hpp"

namespace convgeom {

/// Convex polygon, ccw vertex order. Empty vector means the empty set.
struct ConvexPolygon {
  std::vector<Vec2> v;

  bool empty() const { return v.size() < 3; }

  // Shoelace about the vertex centroid; centering keeps the sum well
  // conditioned for polygons far from the origin or of tiny extent.
  double area() const;

  double support(const Vec2& dir) const;
};

/// Clip a convex polygon against the halfplane <n,y> <= c.
ConvexPolygon clip_halfplane(const ConvexPolygon& poly, const Vec2& n, double c);

/// Intersection of two convex polygons (Sutherland-Hodgman; fine at
/// polytope-body vertex counts).
ConvexPolygon intersect_convex(const ConvexPolygon& subject, const ConvexPolygon& clip);

}  // namespace convgeom

#endif
