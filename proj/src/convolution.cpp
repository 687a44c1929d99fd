#include "convgeom/convolution.hpp"

#include <algorithm>
#include <cmath>

#include "convgeom/parallel.hpp"

namespace convgeom {

namespace {

double eval_F(const BodyPtr& body, double tau, const Vec& x, const VolumeOptions& opts) {
  TranslateProblem p{body, tau, x};
  return intersection_volume(p, VolumeMethod::Auto, opts).value;
}

}  // namespace

RadialProfile convolution_body(const BodyPtr& body, double delta, double tau,
                               const DirectionGrid& grid, double radius_tol,
                               const VolumeOptions& vol_opts) {
  const Body& K = *body;
  if (grid.dim != K.dim()) throw std::invalid_argument("convolution_body: grid dimension mismatch");
  double vol = body_volume(body, VolumeMethod::Auto, vol_opts).value;
  double delta_max = std::min(1.0, std::pow(tau, K.dim())) * vol;
  if (!(delta > 0.0 && delta < delta_max))
    throw std::invalid_argument("delta outside (0, min(1,tau^n)|K|)");

  RadialProfile prof;
  prof.grid = grid;
  prof.delta = delta;
  prof.tau = tau;
  prof.achieved_tol = radius_tol;
  prof.radii.assign(grid.units.size(), 0.0);

  VolumeOptions opts = vol_opts;
  // F must resolve delta crossings; keep its tolerance comfortably below the
  // radius tolerance budget
  opts.tol = std::min(opts.tol, 1e-11);
  opts.rel_tol = 1e-9;

  parallel_for(grid.units.size(), [&](std::size_t i) {
    const Vec& u = grid.units[i];
    double hi = (1.0 + tau) / K.gauge(u);
    double lo = 0.0;
    // F(0) >= delta_max > delta and F -> 0 at the bracket end: monotone
    // non-increasing along rays (even + Brunn-Minkowski)
    for (int it = 0; it < 60 && hi - lo > radius_tol; ++it) {
      double mid = 0.5 * (lo + hi);
      double f = eval_F(body, tau, mid * u, opts);
      if (f >= delta)
        lo = mid;
      else
        hi = mid;
    }
    prof.radii[i] = 0.5 * (lo + hi);
  });
  return prof;
}

RadialProfile body_profile(const BodyPtr& body, const DirectionGrid& grid) {
  RadialProfile prof;
  prof.grid = grid;
  prof.tau = 1.0;
  prof.delta = 0.0;
  prof.radii.resize(grid.units.size());
  for (std::size_t i = 0; i < grid.units.size(); ++i)
    prof.radii[i] = 1.0 / body->gauge(grid.units[i]);
  return prof;
}

FlatnessReport flatness_probe(const RadialProfile& profile) {
  if (profile.grid.dim != 2)
    throw std::invalid_argument("flatness_probe: 2D profiles only");
  std::size_t m = profile.radii.size();
  FlatnessReport rep;
  rep.turning_angles.resize(m);
  rep.normal_jumps.resize(m);

  // boundary points in angular order (grid stores antipodal halves
  // back-to-back, so sort by angle)
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Vec &ua = profile.grid.units[a], &ub = profile.grid.units[b];
    return std::atan2(ua[1], ua[0]) < std::atan2(ub[1], ub[0]);
  });
  std::vector<Vec2> pts(m);
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    pts[i] = profile.point2d(order[i]);
    scale = std::max(scale, pts[i].norm());
  }

  const double collinear_tol = 1e-9;
  int run = 0;
  for (std::size_t i = 0; i < m; ++i) {
    Vec2 e0 = pts[i] - pts[(i + m - 1) % m];
    Vec2 e1 = pts[(i + 1) % m] - pts[i];
    double sin_turn = cross2(e0, e1) / (e0.norm() * e1.norm());
    sin_turn = std::clamp(sin_turn, -1.0, 1.0);
    double turn = std::asin(sin_turn);
    rep.turning_angles[i] = turn;
    double jump = std::acos(std::clamp(e0.dot(e1) / (e0.norm() * e1.norm()), -1.0, 1.0));
    rep.normal_jumps[i] = jump;
    rep.max_normal_jump = std::max(rep.max_normal_jump, jump);
    if (std::abs(sin_turn) < collinear_tol)
      ++run;
    else
      run = 0;
    rep.max_collinear_run = std::max(rep.max_collinear_run, run + 2);  // samples, not edges
  }
  rep.verdict = rep.max_collinear_run >= 3 ? FlatnessVerdict::FlatSegmentFound
                                           : FlatnessVerdict::StrictlyConvex;
  return rep;
}

HomothetyCheck homothety_check(const RadialProfile& profile, const BodyPtr& body,
                               double tolerance) {
  HomothetyCheck out;
  std::size_t m = profile.radii.size();
  std::vector<double> prods(m);
  for (std::size_t i = 0; i < m; ++i)
    prods[i] = profile.radii[i] * body->gauge(profile.grid.units[i]);
  out.scale = pairwise_sum(prods) / static_cast<double>(m);
  for (double v : prods)
    out.max_rel_dev = std::max(out.max_rel_dev, std::abs(v - out.scale) / out.scale);
  out.is_homothet = out.max_rel_dev <= tolerance;
  return out;
}

double curvature_positivity_probe(const RadialProfile& profile) {
  if (profile.grid.dim != 2)
    throw std::invalid_argument("curvature_positivity_probe: 2D profiles only");
  std::size_t m = profile.radii.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Vec &ua = profile.grid.units[a], &ub = profile.grid.units[b];
    return std::atan2(ua[1], ua[0]) < std::atan2(ub[1], ub[0]);
  });
  double min_curv = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    Vec2 a = profile.point2d(order[(i + m - 1) % m]);
    Vec2 b = profile.point2d(order[i]);
    Vec2 c = profile.point2d(order[(i + 1) % m]);
    double area2 = cross2(b - a, c - b);  // 2 * signed triangle area
    double la = (b - a).norm(), lb = (c - b).norm(), lc = (c - a).norm();
    // signed inverse circumradius through three consecutive samples
    double kappa = 2.0 * area2 / (la * lb * lc);
    min_curv = std::min(min_curv, kappa);
  }
  return min_curv;
}

double profile_convexity_defect(const RadialProfile& profile) {
  if (profile.grid.dim != 2) return 0.0;  // 3D handled by per-face checks in tests
  std::size_t m = profile.radii.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Vec &ua = profile.grid.units[a], &ub = profile.grid.units[b];
    return std::atan2(ua[1], ua[0]) < std::atan2(ub[1], ub[0]);
  });
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    Vec2 a = profile.point2d(order[(i + m - 1) % m]);
    Vec2 b = profile.point2d(order[i]);
    Vec2 c = profile.point2d(order[(i + 1) % m]);
    double cr = cross2(b - a, c - b) / ((b - a).norm() * (c - b).norm());
    worst = std::min(worst, cr);
  }
  return worst;
}

}  // namespace convgeom
