#ifndef CONVGEOM_CHARACTERIZE_HPP
#define CONVGEOM_CHARACTERIZE_HPP

#include "convgeom/curvature.hpp"
#include "convgeom/volume.hpp"

namespace convgeom {

/// Spread of F over the gauge shell ||x||_K = alpha: the numerical statistic
/// behind "F depends on ||x||_K only" (zero exactly for ellipsoids).
struct ShellSpreadReport {
  double alpha = 0.0;
  double tau = 1.0;
  int samples = 0;
  double f_min = 0.0;
  double f_max = 0.0;
  double spread = 0.0;
  double rel_spread = 0.0;
  double max_abs_error = 0.0;  // worst certified per-evaluation error
  bool degenerate = false;     // alpha >= 1 + tau: F vanishes on the shell
};

ShellSpreadReport shell_spread(const BodyPtr& body, double tau, double alpha, int n_samples,
                               std::uint64_t seed, const VolumeOptions& vol_opts = {});

/// Observation check: if F were a function of ||.||_L, L must be homothetic
/// to K. Reports the gauge-ratio constancy over a grid and, when it fails,
/// the witness x from the proof construction (F(x') = 0 < F(y') at equal
/// L-gauge).
struct HomothetyNecessity {
  bool consistent = false;
  double ratio_dev = 0.0;  // max relative deviation of gauge_L/gauge_K
  std::optional<Vec> witness;
};

HomothetyNecessity homothety_necessity(const BodyPtr& bodyK, const BodyPtr& bodyL, double tau,
                                       int grid_resolution = 256,
                                       const VolumeOptions& vol_opts = {});

enum class CurvatureLawMode { Oracle, Volumic };

/// Per-direction values of f(u)·||u||_{K*}^{n+1} (f = 1/κ): constant exactly
/// when the curvature law holds.
struct CurvatureLawReport {
  std::vector<Vec> directions;
  std::vector<double> values;
  double mean_k = 0.0;
  double max_rel_dev = 0.0;
  bool violated = false;
  std::string reason;  // e.g. "violated (zero-curvature point)"
};

CurvatureLawReport curvature_law(const BodyPtr& body, double tau, const DirectionGrid& grid,
                                 CurvatureLawMode mode = CurvatureLawMode::Oracle,
                                 const CurvatureSchedule& schedule = {},
                                 const VolumeOptions& vol_opts = {});

}  // namespace convgeom

#endif
