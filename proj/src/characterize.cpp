#include "convgeom/characterize.hpp"

#include <algorithm>
#include <cmath>

#include "convgeom/parallel.hpp"

namespace convgeom {

ShellSpreadReport shell_spread(const BodyPtr& body, double tau, double alpha, int n_samples,
                               std::uint64_t seed, const VolumeOptions& vol_opts) {
  const Body& K = *body;
  if (!(alpha > 0.0)) throw std::invalid_argument("shell_spread: alpha must be positive");
  ShellSpreadReport rep;
  rep.alpha = alpha;
  rep.tau = tau;
  if (alpha >= 1.0 + tau) {
    rep.degenerate = true;
    rep.samples = n_samples;
    return rep;
  }

  // half structured grid (hits the axes and diagonals exactly), half seeded
  // random directions
  int n_grid = std::max(8, (n_samples / 2) / 8 * 8);
  int n_rand = std::max(0, n_samples - n_grid);
  std::vector<Vec> dirs;
  if (K.dim() == 2) {
    DirectionGrid g = DirectionGrid::polar(n_grid);
    dirs = g.units;
  } else {
    DirectionGrid g = DirectionGrid::icosphere(2);
    dirs = g.units;
  }
  Rng rng(substream_seed(seed, 0xA1FA));
  for (int i = 0; i < n_rand; ++i) dirs.push_back(rng.unit_vector(K.dim()));
  rep.samples = static_cast<int>(dirs.size());

  std::vector<double> values(dirs.size());
  std::vector<double> errors(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t i) {
    Vec x = (alpha / K.gauge(dirs[i])) * dirs[i];
    TranslateProblem p{body, tau, x};
    VolumeEstimate est = intersection_volume(p, VolumeMethod::Auto, vol_opts);
    values[i] = est.value;
    errors[i] = est.abs_error;
  });
  rep.f_min = *std::min_element(values.begin(), values.end());
  rep.f_max = *std::max_element(values.begin(), values.end());
  rep.max_abs_error = *std::max_element(errors.begin(), errors.end());
  rep.spread = rep.f_max - rep.f_min;
  rep.rel_spread = rep.f_max > 0 ? rep.spread / rep.f_max : 0.0;
  return rep;
}

HomothetyNecessity homothety_necessity(const BodyPtr& bodyK, const BodyPtr& bodyL, double tau,
                                       int grid_resolution, const VolumeOptions& vol_opts) {
  const Body& K = *bodyK;
  const Body& L = *bodyL;
  if (K.dim() != L.dim()) throw std::invalid_argument("homothety_necessity: dimension mismatch");
  DirectionGrid grid = DirectionGrid::make(K.dim(), grid_resolution);

  HomothetyNecessity out;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t arg_lo = 0, arg_hi = 0;
  for (std::size_t i = 0; i < grid.units.size(); ++i) {
    double r = L.gauge(grid.units[i]) / K.gauge(grid.units[i]);
    if (r < lo) {
      lo = r;
      arg_lo = i;
    }
    if (r > hi) {
      hi = r;
      arg_hi = i;
    }
  }
  out.ratio_dev = (hi - lo) / (0.5 * (hi + lo));
  out.consistent = out.ratio_dev <= 1e-8;
  if (out.consistent) return out;

  // Observation construction: ||x||_L = ||y||_L = 1 with a = ||x||_K >
  // ||y||_K = b; push both to the K-shell 1+tau by the same factor.
  Vec x = grid.units[arg_lo] / L.gauge(grid.units[arg_lo]);  // smallest L/K ratio: largest K-gauge
  Vec y = grid.units[arg_hi] / L.gauge(grid.units[arg_hi]);
  double a = K.gauge(x);
  Vec xp = ((1.0 + tau) / a) * x;
  Vec yp = ((1.0 + tau) / a) * y;
  VolumeEstimate fx = intersection_volume({bodyK, tau, xp}, VolumeMethod::Auto, vol_opts);
  VolumeEstimate fy = intersection_volume({bodyK, tau, yp}, VolumeMethod::Auto, vol_opts);
  if (fx.value <= fx.abs_error + 1e-12 && fy.value > fy.abs_error) out.witness = x;
  return out;
}

CurvatureLawReport curvature_law(const BodyPtr& body, double tau, const DirectionGrid& grid,
                                 CurvatureLawMode mode, const CurvatureSchedule& schedule,
                                 const VolumeOptions& vol_opts) {
  const Body& K = *body;
  if (!K.smooth()) throw std::invalid_argument("curvature_law: smooth positive-curvature kinds only");
  int n = K.dim();

  CurvatureLawReport rep;
  rep.directions = grid.units;
  rep.values.assign(grid.units.size(), 0.0);
  std::vector<int> bad(grid.units.size(), 0);

  parallel_for(grid.units.size(), [&](std::size_t i) {
    const Vec& u = grid.units[i];
    Vec xu = K.support_point(u);
    double kappa = 0.0;
    bool divergent = false;
    if (mode == CurvatureLawMode::Oracle) {
      auto k = K.analytic_curvature(xu);
      if (!k || *k <= 0.0)
        divergent = true;
      else
        kappa = *k;
    } else {
      CurvatureReport cr = volumic_curvature(body, xu, tau, schedule, vol_opts);
      if (cr.divergent || cr.kappa <= 0.0)
        divergent = true;
      else
        kappa = cr.kappa;
    }
    if (divergent) {
      bad[i] = 1;
      return;
    }
    double h = K.support(u);
    rep.values[i] = std::pow(h, n + 1) / kappa;  // f(u) * ||u||_{K*}^{n+1}
  });

  for (std::size_t i = 0; i < bad.size(); ++i)
    if (bad[i]) {
      rep.violated = true;
      rep.reason = "violated (zero-curvature point)";
    }
  if (!rep.violated) {
    rep.mean_k = pairwise_sum(rep.values) / static_cast<double>(rep.values.size());
    for (double v : rep.values)
      rep.max_rel_dev = std::max(rep.max_rel_dev, std::abs(v - rep.mean_k) / rep.mean_k);
  }
  return rep;
}

}  // namespace convgeom
