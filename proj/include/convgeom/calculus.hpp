#ifndef CONVGEOM_CALCULUS_HPP
#define CONVGEOM_CALCULUS_HPP

#include "convgeom/volume.hpp"

namespace convgeom {

/// One-sided derivatives of f(r) = |K1 ∩ (ru + K2)| at r = 0, computed from
/// the four projection-set measures. forward = |C⁺(1,2)| − |C⁻(2,1)|,
/// backward = |C⁻(1,2)| − |C⁺(2,1)| by construction.
struct OneSidedDerivatives {
  double forward = 0.0;
  double backward = 0.0;
  Vec direction;
  double c_plus_12 = 0.0;
  double c_minus_12 = 0.0;
  double c_plus_21 = 0.0;
  double c_minus_21 = 0.0;
};

OneSidedDerivatives one_sided_derivative(const BodyPtr& k1, const BodyPtr& k2, const Vec& u,
                                         int grid_resolution = 1024);

struct GradientResult {
  Vec gradient;         // the M-form surface integral over K ∩ ∂(x+τK)
  Vec gradient_n_form;  // the reverse-translation N-form over (x+τK) ∩ ∂K
  Vec normal_integral;  // ∫_{∂K ∩ (x+τK)} N dν, the outer-normal direction of K(δ,τ)
  std::string flag;     // "", "outside support", "origin"
};

/// Gradient of F(x) = |K ∩ (x+τK)| by the surface-integral formula. Smooth
/// strictly convex kinds only; both integral forms are evaluated and their
/// agreement is the caller's cross check. resolution = quadrature panels per
/// boundary arc (2D) or icosphere subdivision level (3D).
GradientResult grad_F(const TranslateProblem& p, int resolution = 48);

struct BoundaryCurvePoint {
  Vec point;
  Vec normal_body;       // N(y), outer normal of K
  Vec normal_translate;  // M(y), outer normal of x + τK
  double weight;         // local (n-2)-measure: 1 per crossing point in 2D,
                         // trapezoidal arclength in 3D
};

struct BoundaryIntersectionCurve {
  std::vector<BoundaryCurvePoint> points;
};

/// S = ∂K ∩ ∂(x+τK) with normals and measure weights. 2D: the finitely many
/// crossing points by angular sweep + bisection; 3D: marched closed curve.
BoundaryIntersectionCurve boundary_intersection_curve(const TranslateProblem& p,
                                                      int resolution = 4096);

/// Hessian of F by the symmetrized crossing-set integral. Throws
/// std::domain_error("ill-conditioned crossing") when |<M,N>| > 1 - 1e-8.
Mat hessian_F(const TranslateProblem& p, int resolution = 4096);

}  // namespace convgeom

#endif
