#ifndef CONVGEOM_LENS2D_HPP
#define CONVGEOM_LENS2D_HPP

#include <optional>
#include <vector>

#include "convgeom/body.hpp"

namespace convgeom {
namespace detail {

/// Boundary of c + s*K for a smooth strictly convex 2D body, radially
/// parametrized by angle: b(t) = c + s * d(t)/gauge(d(t)), d(t) = (cos t, sin t).
class SmoothBoundary2D {
 public:
  SmoothBoundary2D(const Body& body, double scale, const Vec2& center)
      : body_(&body), s_(scale), c_(center) {}

  Vec2 point(double t) const;
  Vec2 derivative(double t) const;    // db/dt, from the exact gauge gradient
  Vec2 unit_normal(double t) const;   // outer normal of c + sK at b(t)
  double gauge_of(const Vec2& y) const;  // gauge((y - c)/s)

  const Body& body() const { return *body_; }
  double scale() const { return s_; }
  const Vec2& center() const { return c_; }

 private:
  const Body* body_;
  double s_;
  Vec2 c_;
};

struct LensCrossing {
  Vec2 point;
  double theta_a;  // radial angle on boundary A
  double theta_b;  // radial angle on boundary B
};

struct LensArc {
  int owner;        // 0 = boundary A, 1 = boundary B
  double t0, t1;    // ccw, t1 > t0 (wrapped)
};

struct LensGeometry {
  std::vector<LensCrossing> crossings;
  std::vector<LensArc> arcs;      // ccw around the lens
  int containment = -1;           // -1 none, 0 = A inside B, 1 = B inside A
  bool empty = false;
};

/// Locate the boundary structure of A ∩ B. `focus_b` is the angle on B's
/// boundary near which a known-nonempty tiny lens must live (enables the
/// window zoom when a uniform sweep misses it); `hints_b` are crossing angles
/// from a nearby problem for warm restarts.
LensGeometry locate_lens(const SmoothBoundary2D& A, const SmoothBoundary2D& B,
                         std::optional<double> focus_b = std::nullopt,
                         const std::vector<double>& hints_b = {}, int sweep = 4096);

/// Lens geometry for the translate problem K ∩ (x + τK) with a smooth K.
/// Uses the homothety closed forms: containment iff ||x||_K <= |1-τ|,
/// boundary crossings iff |1-τ| < ||x||_K < 1+τ (zooming near ±x as needed).
LensGeometry translate_lens_geometry(const Body& K, double tau, const Vec2& x,
                                     const std::vector<double>& hints_b = {}, int sweep = 4096);

struct AreaSandwich {
  double inscribed = 0.0;
  double circumscribed = 0.0;
  double mid() const { return 0.5 * (inscribed + circumscribed); }
  double half_width() const { return 0.5 * (circumscribed - inscribed); }
};

/// Certified area interval for the lens: inscribed polygon with vertices on
/// the lens boundary, circumscribed polygon from tangent halfplanes at the
/// same samples. `m` is the total vertex budget across arcs.
AreaSandwich lens_area_sandwich(const SmoothBoundary2D& A, const SmoothBoundary2D& B,
                                const LensGeometry& geom, int m);

/// Certified area interval for the cap {y in c+sK : <y,n> >= <support> - depth}.
/// Exact chord side; tangent sandwich on the arc side.
AreaSandwich cap_area_sandwich(const SmoothBoundary2D& A, const Vec2& n, double depth, int m);

/// Full-boundary polygon sandwich of c + sK (used for containment cases and
/// smooth-vs-polytope clipping).
AreaSandwich body_area_sandwich(const SmoothBoundary2D& A, int m);
std::vector<Vec2> sample_boundary(const SmoothBoundary2D& A, int m);  // inscribed vertices

}  // namespace detail
}  // namespace convgeom

#endif
