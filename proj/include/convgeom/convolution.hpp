#ifndef CONVGEOM_CONVOLUTION_HPP
#define CONVGEOM_CONVOLUTION_HPP

#include "convgeom/volume.hpp"

namespace convgeom {

/// Star-shaped radial profile: radii along the directions of a grid.
/// Convolution bodies K(δ,τ) are extracted in this form.
struct RadialProfile {
  DirectionGrid grid;
  std::vector<double> radii;
  double delta = 0.0;
  double tau = 1.0;
  double achieved_tol = 0.0;

  Vec2 point2d(std::size_t i) const {
    return Vec2(radii[i] * grid.units[i][0], radii[i] * grid.units[i][1]);
  }
};

/// K(δ,τ) = {x : |K ∩ (x+τK)| ≥ δ}: per-direction bisection of F(t·u) = δ
/// using ray monotonicity, bracket [0, (1+τ)/gauge(u)].
RadialProfile convolution_body(const BodyPtr& body, double delta, double tau,
                               const DirectionGrid& grid, double radius_tol = 1e-9,
                               const VolumeOptions& vol_opts = {});

/// Radial profile of the body itself (r(u) = 1/gauge(u)); the polytope
/// reference input for the flatness probe.
RadialProfile body_profile(const BodyPtr& body, const DirectionGrid& grid);

enum class FlatnessVerdict { StrictlyConvex, FlatSegmentFound };

struct FlatnessReport {
  std::vector<double> turning_angles;   // per boundary sample (2D)
  std::vector<double> normal_jumps;     // angle between adjacent edge normals
  int max_collinear_run = 0;            // longest run of collinear samples
  double max_normal_jump = 0.0;         // corner proxy
  FlatnessVerdict verdict = FlatnessVerdict::StrictlyConvex;
};

/// Turning-angle scan of a 2D profile: a run of >= 3 samples collinear within
/// 1e-9 flags a flat segment.
FlatnessReport flatness_probe(const RadialProfile& profile);

struct HomothetyCheck {
  bool is_homothet = false;
  double scale = 0.0;
  double max_rel_dev = 0.0;
};

/// Is the profile a scaled copy of the body? Tests r(u)·gauge(u) constancy.
HomothetyCheck homothety_check(const RadialProfile& profile, const BodyPtr& body,
                               double tolerance = 1e-6);

/// Minimum three-point circumradius-based discrete curvature along the
/// reconstructed 2D boundary.
double curvature_positivity_probe(const RadialProfile& profile);

/// Convexity defect of the profile polygon: most negative turning cross
/// product, normalized. >= -tol means convex. (RadialProfile invariant.)
double profile_convexity_defect(const RadialProfile& profile);

}  // namespace convgeom

#endif
