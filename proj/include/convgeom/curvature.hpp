#ifndef CONVGEOM_CURVATURE_HPP
#define CONVGEOM_CURVATURE_HPP

#include "convgeom/volume.hpp"

namespace convgeom {

/// c_n = 2 (ω_{n-1}/(n+1))^{2/(n+1)}, ω_k the k-ball volume.
double cn_constant(int n);

/// The point x_h = λx (λ > 0) at which K ∩ (x_h + τK) has width h in the
/// direction N(x). Closed form λ = 1+τ − h/<x,N(x)> inside its validity range
/// [max(1−τ, τ−1), 1+τ], verified against width_of_intersection; bisection on
/// λ otherwise.
Vec locate_xh(const BodyPtr& body, const Vec& x, double tau, double h);

struct CurvatureSchedule {
  double h0 = 0.0;  // 0 = auto: 0.2 * <x, N(x)>
  int levels = 6;   // h_k = h0 * 2^{-k}, k = 0..levels
};

/// h-sequence of volumic estimates with the extrapolated curvature.
struct CurvatureReport {
  Vec x;
  double tau = 1.0;
  std::vector<double> h_sequence;
  std::vector<double> raw_estimates;
  double kappa = 0.0;          // extrapolated; 0 when divergent
  bool divergent = false;      // the κ=0 regime
  double fit_exponent = 0.0;
  double fit_residual = 0.0;
  std::string flag;            // "", "divergent (kappa=0 regime)", "h too small for volume tolerance"
};

/// Gauss-Kronecker curvature via the volumic limit
/// κ(x) = lim_{h→0} c_n^{n+1} h^{n+1} / [((1+τ)/τ)^{n-1} |K ∩ (x_h+τK)|²].
CurvatureReport volumic_curvature(const BodyPtr& body, const Vec& x, double tau,
                                  const CurvatureSchedule& schedule = {},
                                  const VolumeOptions& vol_opts = {});

/// Same shape via hyperplane caps: κ(x) = lim c_n^{n+1} h^{n+1} / |K ∩ H_h⁺|².
using CapReport = CurvatureReport;
CapReport cap_curvature(const BodyPtr& body, const Vec& x,
                        const CurvatureSchedule& schedule = {},
                        const VolumeOptions& vol_opts = {});

/// |K ∩ {y : <y,N> >= h_K(N) − depth}|, the cap volume behind the formula
/// above. Exact sandwich in 2D, Monte Carlo in 3D.
VolumeEstimate cap_volume(const BodyPtr& body, const Vec& normal, double depth,
                          const VolumeOptions& opts = {});

}  // namespace convgeom

#endif
