// Independent reference computations for the test suites. Everything here is
// closed-form or brute-force and never calls the code paths under test.
#ifndef CONVGEOM_TESTS_ORACLES_HPP
#define CONVGEOM_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>

#include "convgeom/body.hpp"

namespace oracle {

using convgeom::Body;
using convgeom::Vec;
using convgeom::Vec2;

// area of the intersection of two unit disks at center distance d
inline double lens_area_unit_disks(double d) {
  if (d <= 0) return convgeom::kPi;
  if (d >= 2) return 0.0;
  return 2.0 * std::acos(d / 2.0) - (d / 2.0) * std::sqrt(4.0 - d * d);
}

// general two-circle intersection area, radii r and R, center distance d
inline double lens_area_circles(double r, double R, double d) {
  if (d >= r + R) return 0.0;
  if (d <= std::abs(r - R)) {
    double s = std::min(r, R);
    return convgeom::kPi * s * s;
  }
  double a1 = std::acos((d * d + r * r - R * R) / (2.0 * d * r));
  double a2 = std::acos((d * d + R * R - r * r) / (2.0 * d * R));
  double tri = 0.5 * std::sqrt((-d + r + R) * (d + r - R) * (d - r + R) * (d + r + R));
  return r * r * a1 + R * R * a2 - tri;
}

// |[-1,1]^2 ∩ (x + [-1,1]^2)|, the product formula
inline double square_translate_area(const Vec2& x) {
  double a = 2.0 - std::abs(x.x());
  double b = 2.0 - std::abs(x.y());
  if (a <= 0 || b <= 0) return 0.0;
  return a * b;
}

// |[-1,1]^3 ∩ (x + [-1,1]^3)|
inline double cube_translate_volume(const Vec& x) {
  double v = 1.0;
  for (int i = 0; i < 3; ++i) {
    double a = 2.0 - std::abs(x[i]);
    if (a <= 0) return 0.0;
    v *= a;
  }
  return v;
}

// lens volume of two unit balls in R^3 at center distance d
inline double lens_volume_unit_balls(double d) {
  if (d <= 0) return 4.0 * convgeom::kPi / 3.0;
  if (d >= 2) return 0.0;
  return convgeom::kPi / 12.0 * (4.0 + d) * (2.0 - d) * (2.0 - d);
}

// midpoint-grid brute force for |K ∩ (x + τK)| in 2D; error ~ perimeter * cell
inline double brute_force_area(const Body& K, double tau, const Vec2& x, int n) {
  Vec e1 = Vec::Zero(2), e2 = Vec::Zero(2);
  e1[0] = 1.0;
  e2[1] = 1.0;
  double hx = K.support(e1), hy = K.support(e2);
  double cell_x = 2.0 * hx / n, cell_y = 2.0 * hy / n;
  long long hits = 0;
  Vec y(2), z(2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      y[0] = -hx + (i + 0.5) * cell_x;
      y[1] = -hy + (j + 0.5) * cell_y;
      if (K.gauge(y) > 1.0) continue;
      z[0] = (y[0] - x.x()) / tau;
      z[1] = (y[1] - x.y()) / tau;
      if (K.gauge(z) <= 1.0) ++hits;
    }
  return hits * cell_x * cell_y;
}

// five-point central first derivative
inline double fd5(const std::function<double(double)>& f, double t0, double h) {
  return (-f(t0 + 2 * h) + 8 * f(t0 + h) - 8 * f(t0 - h) + f(t0 - 2 * h)) / (12.0 * h);
}

// curvature of the ellipse x²/a² + y²/b² = 1 at parameter t (point (a cos t, b sin t))
inline double ellipse_curvature(double a, double b, double t) {
  double s = a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t);
  return a * b / std::pow(s, 1.5);
}

}  // namespace oracle

#endif
