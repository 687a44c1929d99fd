#ifndef CONVGEOM_CURVE3D_HPP
#define CONVGEOM_CURVE3D_HPP

#include <vector>

#include "convgeom/body.hpp"

namespace convgeom {
namespace detail {

/// Sampled closed curve S = ∂K ∩ ∂(x + τK) for a smooth strictly convex 3D
/// body: predictor-corrector marching in the intersection of the two gauge
/// level sets, step length adapted to the local turning angle.
struct IntersectionCurve3D {
  std::vector<Vec> points;
  bool closed = false;
  double length = 0.0;

  /// Trapezoidal weight of node i (half the two adjacent segment lengths).
  double weight(std::size_t i) const;
};

/// Empty result when the boundaries do not cross (containment or empty
/// intersection). Throws on non-smooth kinds.
IntersectionCurve3D march_intersection_curve(const Body& K, double tau, const Vec& x,
                                             int resolution);

}  // namespace detail
}  // namespace convgeom

#endif
