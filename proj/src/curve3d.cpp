#include "convgeom/curve3d.hpp"

#include <cmath>

namespace convgeom {
namespace detail {

double IntersectionCurve3D::weight(std::size_t i) const {
  std::size_t n = points.size();
  if (n < 2) return 0.0;
  const Vec& prev = points[(i + n - 1) % n];
  const Vec& next = points[(i + 1) % n];
  return 0.5 * ((points[i] - prev).norm() + (next - points[i]).norm());
}

namespace {

struct LevelPair {
  const Body* K;
  double tau;
  Vec x;

  double g1(const Vec& y) const { return K->gauge(y) - 1.0; }
  double g2(const Vec& y) const { return K->gauge((y - x) / tau) - 1.0; }
  Vec grad1(const Vec& y) const { return K->gauge_gradient(y); }
  Vec grad2(const Vec& y) const { return K->gauge_gradient((y - x) / tau) / tau; }

  // Gauss-Newton projection onto {g1 = 0} ∩ {g2 = 0}
  bool project(Vec& y) const {
    for (int it = 0; it < 30; ++it) {
      double r1 = g1(y), r2 = g2(y);
      if (std::abs(r1) < 1e-13 && std::abs(r2) < 1e-13) return true;
      Vec a = grad1(y), b = grad2(y);
      double aa = a.dot(a), ab = a.dot(b), bb = b.dot(b);
      double det = aa * bb - ab * ab;
      if (std::abs(det) < 1e-18) return false;
      double l1 = (bb * r1 - ab * r2) / det;
      double l2 = (aa * r2 - ab * r1) / det;
      y -= l1 * a + l2 * b;
    }
    return std::abs(g1(y)) < 1e-10 && std::abs(g2(y)) < 1e-10;
  }

  Vec tangent(const Vec& y) const {
    Vec t = cross3d(grad1(y), grad2(y));
    double n = t.norm();
    return n > 0 ? Vec(t / n) : Vec::Zero(3);
  }
};

}  // namespace

IntersectionCurve3D march_intersection_curve(const Body& K, double tau, const Vec& x,
                                             int resolution) {
  if (K.dim() != 3) throw std::invalid_argument("march_intersection_curve: 3D bodies only");
  if (!K.smooth()) throw std::invalid_argument("march_intersection_curve: smooth bodies only");
  IntersectionCurve3D out;
  double g = K.gauge(x);
  if (g >= 1.0 + tau || g <= std::abs(1.0 - tau) + 1e-12 || g == 0.0) return out;
  if (resolution < 32) resolution = 32;

  LevelPair lp{&K, tau, x};

  // Seed on a meridian of the translate boundary through -x^ (inside K) and
  // +x^ (outside K).
  Vec xhat = x / x.norm();
  Vec v = unit_orthogonal3(xhat);
  auto meridian_point = [&](double phi) {
    Vec d = std::cos(phi) * (-xhat) + std::sin(phi) * v;
    return Vec(x + tau * d / K.gauge(d));
  };
  double lo = 0.0, hi = kPi;
  double flo = lp.g1(meridian_point(lo));
  double fhi = lp.g1(meridian_point(hi));
  if ((flo > 0) == (fhi > 0)) return out;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    double mid = 0.5 * (lo + hi);
    if ((lp.g1(meridian_point(mid)) > 0) == (flo > 0))
      lo = mid;
    else
      hi = mid;
  }
  Vec y = meridian_point(0.5 * (lo + hi));
  if (!lp.project(y)) return out;
  Vec start = y;

  double rho = (y - xhat * xhat.dot(y)).norm();  // distance to the x-axis
  double step = std::max(2.0 * kPi * std::max(rho, 1e-6) / resolution, 1e-9);
  double target_turn = 2.0 * kPi / resolution;

  out.points.push_back(y);
  Vec t_prev = lp.tangent(y);
  if (t_prev.norm() == 0.0) return out;
  long max_steps = 64L * resolution;
  for (long k = 0; k < max_steps; ++k) {
    Vec t = lp.tangent(y);
    if (t.norm() == 0.0) break;
    if (t.dot(t_prev) < 0) t = -t;
    Vec y_next = y + step * t;
    if (!lp.project(y_next)) {
      step *= 0.5;
      if (step < 1e-12) break;
      continue;
    }
    double turn = std::acos(std::min(1.0, std::max(-1.0, t.dot(t_prev))));
    if (turn > 2.5 * target_turn && step > 1e-11) {
      step *= 0.5;
      continue;
    }
    y = y_next;
    t_prev = t;
    out.points.push_back(y);
    if (turn < 0.4 * target_turn) step *= 1.4;
    if (out.points.size() > 8 && (y - start).norm() < 0.75 * step) {
      out.closed = true;
      out.points.pop_back();  // avoid duplicating the start
      break;
    }
  }
  std::size_t n = out.points.size();
  for (std::size_t i = 0; i < n; ++i)
    out.length += (out.points[(i + 1) % n] - out.points[i]).norm();
  return out;
}

}  // namespace detail
}  // namespace convgeom
