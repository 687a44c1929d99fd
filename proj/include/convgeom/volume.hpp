#ifndef CONVGEOM_VOLUME_HPP
#define CONVGEOM_VOLUME_HPP

#include <cstdint>
#include <string>

#include "convgeom/body.hpp"

namespace convgeom {

enum class VolumeMethod { Auto, Exact, MonteCarlo };
enum class VolumeMethodUsed { ExactPoly2D, ExactPoly3D, MonteCarlo };

std::string method_used_name(VolumeMethodUsed m);

/// Volume value with an explicit error bound: exact paths report a certified
/// interval (inscribed/circumscribed polygon sandwich), Monte Carlo a 95% CI
/// half-width.
struct VolumeEstimate {
  double value = 0.0;
  double abs_error = 0.0;
  VolumeMethodUsed method = VolumeMethodUsed::ExactPoly2D;
  long long samples = 0;   // 0 for exact paths
  std::string flag;        // "", "budget exceeded"
};

struct TranslateProblem {
  BodyPtr body;
  double tau = 1.0;
  Vec x;
};

struct VolumeOptions {
  double tol = 1e-6;
  double rel_tol = 0.0;           // optional: stop when err <= rel_tol * |value|
  std::uint64_t seed = 0;
  int poly_m = 4096;              // initial polygonization budget per evaluation
  int poly_m_max = 1 << 17;
  long long mc_max_samples = 200'000'000;
};

/// F(x) = |K ∩ (x + τK)|. Exact in 2D (polygon clipping with a certified
/// inscribed/circumscribed sandwich) and for 3D halfspace polytopes (vertex
/// enumeration); Monte Carlo with a binomial CI otherwise.
VolumeEstimate intersection_volume(const TranslateProblem& p, VolumeMethod method,
                                   const VolumeOptions& opts = {});

/// |K|, same machinery at x = 0, τ = 1.
VolumeEstimate body_volume(const BodyPtr& body, VolumeMethod method, const VolumeOptions& opts = {});

/// Width sup<y,dir> - inf<y,dir> of K ∩ (x + τK). Throws std::domain_error
///("empty intersection") when the intersection is empty.
double width_of_intersection(const TranslateProblem& p, const Vec& direction);

namespace detail {
/// General |K1 ∩ (offset + K2)| in 2D, used by tests and Lemma 2.1 cross
/// checks. Dispatches like intersection_volume but without the homothety
/// shortcuts.
VolumeEstimate pair_intersection_area2d(const BodyPtr& k1, const BodyPtr& k2, const Vec2& offset,
                                        const VolumeOptions& opts = {});
}  // namespace detail

}  // namespace convgeom

#endif
