#include "convgeom/lens2d.hpp"

#include <algorithm>
#include <cmath>

#include "convgeom/polygon2d.hpp"

namespace convgeom {
namespace detail {

Vec2 SmoothBoundary2D::point(double t) const {
  Vec2 d = dir2(t);
  Vec x(2);
  x << d.x(), d.y();
  double g = body_->gauge(x);
  return c_ + (s_ / g) * d;
}

Vec2 SmoothBoundary2D::derivative(double t) const {
  Vec2 d = dir2(t);
  Vec2 dp(-d.y(), d.x());
  Vec x(2);
  x << d.x(), d.y();
  double g = body_->gauge(x);
  Vec gg = body_->gauge_gradient(x);
  double gp = gg[0] * dp.x() + gg[1] * dp.y();  // d/dt gauge(d(t))
  return s_ * (dp * g - d * gp) / (g * g);
}

Vec2 SmoothBoundary2D::unit_normal(double t) const {
  Vec2 d = dir2(t);
  Vec x(2);
  x << d.x(), d.y();
  Vec gg = body_->gauge_gradient(x);
  Vec2 n(gg[0], gg[1]);
  return n / n.norm();
}

double SmoothBoundary2D::gauge_of(const Vec2& y) const {
  Vec x(2);
  x << (y.x() - c_.x()) / s_, (y.y() - c_.y()) / s_;
  return body_->gauge(x);
}

namespace {

// sign of (gauge_A at B(t)) - 1
double level(const SmoothBoundary2D& A, const SmoothBoundary2D& B, double t) {
  return A.gauge_of(B.point(t)) - 1.0;
}

double bisect_crossing(const SmoothBoundary2D& A, const SmoothBoundary2D& B, double lo, double hi,
                       double flo) {
  for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = level(A, B, mid);
    if ((fm > 0) == (flo > 0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> sweep_crossings(const SmoothBoundary2D& A, const SmoothBoundary2D& B,
                                    double t_begin, double t_end, int n) {
  std::vector<double> roots;
  double prev_t = t_begin;
  double prev_f = level(A, B, prev_t);
  for (int k = 1; k <= n; ++k) {
    double t = t_begin + (t_end - t_begin) * k / n;
    double f = level(A, B, t);
    if ((prev_f > 0) != (f > 0)) roots.push_back(bisect_crossing(A, B, prev_t, t, prev_f));
    prev_t = t;
    prev_f = f;
  }
  return roots;
}

double angle_of(const Vec2& p, const Vec2& center) {
  return std::atan2(p.y() - center.y(), p.x() - center.x());
}

}  // namespace

LensGeometry locate_lens(const SmoothBoundary2D& A, const SmoothBoundary2D& B,
                         std::optional<double> focus_b, const std::vector<double>& hints_b,
                         int sweep) {
  LensGeometry out;
  std::vector<double> roots;

  // Warm restart: bracket around hint angles with an expanding window.
  if (!hints_b.empty()) {
    for (double hint : hints_b) {
      double w = 1e-3;
      for (int round = 0; round < 14 && w < kPi; ++round, w *= 3.0) {
        auto local = sweep_crossings(A, B, hint - w, hint + w, 24);
        if (!local.empty()) {
          for (double r : local) roots.push_back(wrap_angle(r));
          break;
        }
      }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-10; }),
                roots.end());
    if (roots.size() % 2 != 0) roots.clear();  // inconsistent warm result; fall through
  }

  if (roots.empty()) {
    roots = sweep_crossings(A, B, 0.0, 2.0 * kPi, sweep);
    for (double& r : roots) r = wrap_angle(r);
    std::sort(roots.begin(), roots.end());
  }

  // Window zoom for a known-nonempty lens the uniform sweep missed.
  if (roots.empty() && focus_b) {
    double w = 2.0 * kPi / sweep;
    for (int round = 0; round < 48 && roots.empty(); ++round, w *= 0.5) {
      roots = sweep_crossings(A, B, *focus_b - w, *focus_b + w, 512);
    }
    for (double& r : roots) r = wrap_angle(r);
    std::sort(roots.begin(), roots.end());
  }

  if (roots.empty()) {
    // no boundary crossings: containment or empty
    if (level(A, B, 0.0) < 0.0) {
      out.containment = 1;  // all of dB inside A => B inside A
      return out;
    }
    if (B.gauge_of(A.point(0.0)) < 1.0) {
      out.containment = 0;  // A inside B
      return out;
    }
    out.empty = true;
    return out;
  }

  for (double tb : roots) {
    LensCrossing c;
    c.theta_b = tb;
    c.point = B.point(tb);
    c.theta_a = wrap_angle(angle_of(c.point, A.center()));
    out.crossings.push_back(c);
  }

  // B-arcs inside A: consecutive root intervals with an interior midpoint.
  auto collect_arcs = [&](int owner) {
    std::vector<double> ts;
    for (const auto& c : out.crossings) ts.push_back(owner == 0 ? c.theta_a : c.theta_b);
    std::sort(ts.begin(), ts.end());
    std::size_t k = ts.size();
    for (std::size_t i = 0; i < k; ++i) {
      double t0 = ts[i];
      double t1 = (i + 1 < k) ? ts[i + 1] : ts[0] + 2.0 * kPi;
      double mid = 0.5 * (t0 + t1);
      bool inside = (owner == 0) ? (B.gauge_of(A.point(mid)) < 1.0)
                                 : (A.gauge_of(B.point(mid)) < 1.0);
      if (inside) out.arcs.push_back(LensArc{owner, t0, t1});
    }
  };
  collect_arcs(0);
  collect_arcs(1);

  // ccw order around the lens
  Vec2 centroid(0, 0);
  for (const auto& c : out.crossings) centroid += c.point;
  centroid /= static_cast<double>(out.crossings.size());
  auto arc_mid = [&](const LensArc& a) {
    double tm = 0.5 * (a.t0 + a.t1);
    return a.owner == 0 ? A.point(tm) : B.point(tm);
  };
  std::sort(out.arcs.begin(), out.arcs.end(), [&](const LensArc& x, const LensArc& y) {
    return angle_of(arc_mid(x), centroid) < angle_of(arc_mid(y), centroid);
  });
  return out;
}

LensGeometry translate_lens_geometry(const Body& K, double tau, const Vec2& x,
                                     const std::vector<double>& hints_b, int sweep) {
  Vec xv(2);
  xv << x.x(), x.y();
  double g = K.gauge(xv);
  LensGeometry out;
  if (g >= 1.0 + tau) {
    out.empty = true;
    return out;
  }
  if (g <= std::abs(1.0 - tau) + 1e-12) {
    out.containment = tau <= 1.0 ? 1 : 0;
    return out;
  }
  SmoothBoundary2D A(K, 1.0, Vec2(0, 0));
  SmoothBoundary2D B(K, tau, x);
  double focus = std::atan2(-x.y(), -x.x());
  out = locate_lens(A, B, focus, hints_b, sweep);
  if (out.crossings.empty()) {
    // |1-tau| < g < 1+tau forces crossings; a tiny poke-out arc near +x can
    // hide from the uniform sweep when tau != 1
    out = locate_lens(A, B, std::atan2(x.y(), x.x()), {}, sweep);
  }
  return out;
}

namespace {

struct Tangent {
  Vec2 n;     // unit outer normal of the lens
  double c;   // offset: halfplane <n,y> <= c
  Vec2 touch;
};

// Intersection of consecutive tangent lines; falls back to the shared touch
// point when the lines are near-parallel.
Vec2 tangent_vertex(const Tangent& a, const Tangent& b) {
  double det = cross2(a.n, b.n);
  if (std::abs(det) < 1e-13) return 0.5 * (a.touch + b.touch);
  double x = (a.c * b.n.y() - b.c * a.n.y()) / det;
  double y = (a.n.x() * b.c - b.n.x() * a.c) / det;
  return Vec2(x, y);
}

AreaSandwich sandwich_from_chains(const std::vector<std::vector<Vec2>>& inscribed_chains,
                                  const std::vector<std::vector<Tangent>>& tangent_chains,
                                  bool closed) {
  ConvexPolygon insc;
  for (const auto& chain : inscribed_chains)
    for (const auto& p : chain) {
      if (!insc.v.empty() && (insc.v.back() - p).norm() < 1e-15) continue;
      insc.v.push_back(p);
    }
  if (insc.v.size() >= 2 && (insc.v.front() - insc.v.back()).norm() < 1e-15) insc.v.pop_back();

  std::vector<Tangent> tangents;
  for (const auto& chain : tangent_chains) tangents.insert(tangents.end(), chain.begin(), chain.end());

  ConvexPolygon circ;
  std::size_t m = tangents.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (!closed && i + 1 == m) break;
    circ.v.push_back(tangent_vertex(tangents[i], tangents[(i + 1) % m]));
  }

  AreaSandwich s;
  s.inscribed = insc.area();
  s.circumscribed = circ.area();
  if (s.circumscribed < s.inscribed) s.circumscribed = s.inscribed;  // fp guard
  return s;
}

std::vector<Vec2> arc_points(const SmoothBoundary2D& bd, double t0, double t1, int n,
                             const Vec2* exact_begin, const Vec2* exact_end) {
  std::vector<Vec2> pts;
  pts.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    double t = t0 + (t1 - t0) * k / n;
    if (k == 0 && exact_begin)
      pts.push_back(*exact_begin);
    else if (k == n && exact_end)
      pts.push_back(*exact_end);
    else
      pts.push_back(bd.point(t));
  }
  return pts;
}

std::vector<Tangent> arc_tangents(const SmoothBoundary2D& bd, double t0, double t1, int n) {
  std::vector<Tangent> ts;
  ts.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    double t = t0 + (t1 - t0) * k / n;
    Tangent tg;
    tg.touch = bd.point(t);
    tg.n = bd.unit_normal(t);
    tg.c = tg.n.dot(tg.touch);
    ts.push_back(tg);
  }
  return ts;
}

}  // namespace

AreaSandwich lens_area_sandwich(const SmoothBoundary2D& A, const SmoothBoundary2D& B,
                                const LensGeometry& geom, int m) {
  if (geom.empty) return AreaSandwich{0.0, 0.0};
  if (geom.containment == 0) return body_area_sandwich(A, m);
  if (geom.containment == 1) return body_area_sandwich(B, m);

  double total_angle = 0.0;
  for (const auto& a : geom.arcs) total_angle += a.t1 - a.t0;
  if (total_angle <= 0 || geom.arcs.empty()) return AreaSandwich{0.0, 0.0};

  std::vector<std::vector<Vec2>> chains;
  std::vector<std::vector<Tangent>> tangent_chains;
  for (const auto& arc : geom.arcs) {
    const SmoothBoundary2D& bd = arc.owner == 0 ? A : B;
    int n = std::max(8, static_cast<int>(std::lround(m * (arc.t1 - arc.t0) / total_angle)));
    // pin exact crossing endpoints so arcs share corners bit-identically
    const Vec2 *pb = nullptr, *pe = nullptr;
    for (const auto& c : geom.crossings) {
      double tc = arc.owner == 0 ? c.theta_a : c.theta_b;
      if (std::abs(wrap_angle(tc - arc.t0)) < 1e-9 || std::abs(wrap_angle(arc.t0 - tc)) < 1e-9)
        pb = &c.point;
      if (std::abs(wrap_angle(tc - arc.t1)) < 1e-9 || std::abs(wrap_angle(arc.t1 - tc)) < 1e-9)
        pe = &c.point;
    }
    chains.push_back(arc_points(bd, arc.t0, arc.t1, n, pb, pe));
    tangent_chains.push_back(arc_tangents(bd, arc.t0, arc.t1, n));
  }
  return sandwich_from_chains(chains, tangent_chains, true);
}

AreaSandwich cap_area_sandwich(const SmoothBoundary2D& A, const Vec2& n, double depth, int m) {
  // plane <y, n> = h - depth, h the support value of the translated body
  Vec u(2);
  u << n.x(), n.y();
  Vec sp = A.body().support_point(u);
  Vec2 peak = A.center() + A.scale() * Vec2(sp[0], sp[1]);
  double h = n.dot(peak);
  double c = h - depth;
  if (depth <= 0) return AreaSandwich{0.0, 0.0};

  double t_peak = std::atan2(peak.y() - A.center().y(), peak.x() - A.center().x());
  auto side = [&](double t) { return n.dot(A.point(t)) - c; };
  if (side(t_peak) <= 0) return AreaSandwich{0.0, 0.0};

  // <b(t), n> is increasing then decreasing between the two support extremes;
  // bisect on each monotone half around the peak angle.
  auto find_root = [&](double lo, double hi) {
    double flo = side(lo);
    for (int it = 0; it < 100 && std::abs(hi - lo) > 1e-14; ++it) {
      double mid = 0.5 * (lo + hi);
      if ((side(mid) > 0) == (flo > 0))
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  double t1 = find_root(t_peak - kPi, t_peak);  // entering the cap
  double t2 = find_root(t_peak, t_peak + kPi);  // leaving the cap

  Vec2 p1 = A.point(t1), p2 = A.point(t2);
  int narc = std::max(16, m);
  auto chain = arc_points(A, t1, t2, narc, &p1, &p2);
  auto tangents = arc_tangents(A, t1, t2, narc);
  // close with the exact chord: halfplane <y,n> >= c, i.e. <-n, y> <= -c
  Tangent chord;
  chord.n = -n;
  chord.c = -c;
  chord.touch = 0.5 * (p1 + p2);
  tangents.push_back(chord);
  return sandwich_from_chains({chain}, {tangents}, true);
}

std::vector<Vec2> sample_boundary(const SmoothBoundary2D& A, int m) {
  std::vector<Vec2> pts;
  pts.reserve(m);
  for (int k = 0; k < m; ++k) pts.push_back(A.point(2.0 * kPi * k / m));
  return pts;
}

AreaSandwich body_area_sandwich(const SmoothBoundary2D& A, int m) {
  if (m < 8) m = 8;
  std::vector<std::vector<Vec2>> chains{sample_boundary(A, m)};
  auto tangents = arc_tangents(A, 0.0, 2.0 * kPi * (m - 1) / m, m - 1);
  return sandwich_from_chains(chains, {tangents}, true);
}

}  // namespace detail
}  // namespace convgeom
