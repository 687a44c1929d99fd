#include "convgeom/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "convgeom/curve3d.hpp"
#include "convgeom/lens2d.hpp"
#include "convgeom/parallel.hpp"

namespace convgeom {

namespace {

using detail::LensGeometry;
using detail::SmoothBoundary2D;

constexpr double kTangencyGuard = 1e-8;  // denominator failure surface of Eq. (4)

// ---------------------------------------------------------------------------
// Lemma 2.1: chord endpoints phi^±(y) = max/min{t : y + t u in K}

struct Chord {
  bool hit = false;
  double lo = 0.0, hi = 0.0;
};

// exact piecewise-linear chord for halfspace-representable bodies
Chord chord_linear(const Mat& A, const Vec& b, const Vec& y, const Vec& u) {
  Chord c;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < A.rows(); ++i) {
    double den = A.row(i).dot(u);
    double num = b[i] - A.row(i).dot(y);
    if (std::abs(den) < 1e-15) {
      if (num < 0) return c;  // line misses the slab
    } else if (den > 0) {
      hi = std::min(hi, num / den);
    } else {
      lo = std::max(lo, num / den);
    }
  }
  if (lo > hi) return c;
  c.hit = true;
  c.lo = lo;
  c.hi = hi;
  return c;
}

// gauge bisection for smooth kinds; gauge is convex along the line
Chord chord_smooth(const Body& K, const Vec& y, const Vec& u) {
  Chord c;
  double r = K.support(u);
  double lo = -r, hi = r;
  // ternary search for the gauge minimum on the chord
  double a = lo, b = hi;
  for (int it = 0; it < 200 && b - a > 1e-13 * (1.0 + r); ++it) {
    double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (K.gauge(y + m1 * u) < K.gauge(y + m2 * u))
      b = m2;
    else
      a = m1;
  }
  double tmin = 0.5 * (a + b);
  if (K.gauge(y + tmin * u) > 1.0) return c;
  auto bisect = [&](double inside, double outside) {
    for (int it = 0; it < 100 && std::abs(outside - inside) > 1e-13 * (1.0 + r); ++it) {
      double mid = 0.5 * (inside + outside);
      if (K.gauge(y + mid * u) <= 1.0)
        inside = mid;
      else
        outside = mid;
    }
    return 0.5 * (inside + outside);
  };
  c.hit = true;
  c.lo = bisect(tmin, lo - 1e-9);
  c.hi = bisect(tmin, hi + 1e-9);
  return c;
}

Chord chord(const Body& K, const Vec& y, const Vec& u) {
  if (auto hs = K.as_halfspaces()) return chord_linear(hs->first, hs->second, y, u);
  if (auto poly = K.as_polygon2d()) {
    Mat A(poly->size(), 2);
    Vec b(poly->size());
    std::size_t m = poly->size();
    for (std::size_t i = 0; i < m; ++i) {
      Vec2 e = (*poly)[(i + 1) % m] - (*poly)[i];
      A(i, 0) = e.y();
      A(i, 1) = -e.x();
      b[i] = A.row(i).dot(Vec2((*poly)[i]));
    }
    return chord_linear(A, b, y, u);
  }
  return chord_smooth(K, y, u);
}

// classification mask: bit 0..3 = C+(1,2), C-(1,2), C+(2,1), C-(2,1); bit 7 = inside projection
unsigned classify(const Body& k1, const Body& k2, const Vec& y, const Vec& u, double eq_tol) {
  Chord c1 = chord(k1, y, u);
  Chord c2 = chord(k2, y, u);
  if (!c1.hit || !c2.hit) return 0;
  if (std::max(c1.lo, c2.lo) > std::min(c1.hi, c2.hi)) return 0;
  auto gt = [&](double a, double b) { return a - b > eq_tol; };
  auto ge = [&](double a, double b) { return a - b > -eq_tol; };
  unsigned mask = 0x80;
  if (gt(c1.hi, c2.hi) && ge(c2.hi, c1.lo) && gt(c1.lo, c2.lo)) mask |= 1;  // C+(1,2)
  if (ge(c1.hi, c2.hi) && gt(c2.hi, c1.lo) && ge(c1.lo, c2.lo)) mask |= 2;  // C-(1,2)
  if (gt(c2.hi, c1.hi) && ge(c1.hi, c2.lo) && gt(c2.lo, c1.lo)) mask |= 4;  // C+(2,1)
  if (ge(c2.hi, c1.hi) && gt(c1.hi, c2.lo) && ge(c2.lo, c1.lo)) mask |= 8;  // C-(2,1)
  return mask;
}

}  // namespace

OneSidedDerivatives one_sided_derivative(const BodyPtr& k1, const BodyPtr& k2, const Vec& u_in,
                                         int grid_resolution) {
  const Body& K1 = *k1;
  const Body& K2 = *k2;
  int n = K1.dim();
  if (K2.dim() != n) throw std::invalid_argument("one_sided_derivative: dimension mismatch");
  if (n != 2 && n != 3) throw std::invalid_argument("one_sided_derivative: dimensions 2 and 3 only");
  Vec u = u_in / u_in.norm();
  int m = std::max(grid_resolution, 16);

  bool both_linear = (K1.as_polygon2d() || K1.as_halfspaces()) &&
                     (K2.as_polygon2d() || K2.as_halfspaces());
  double eq_tol = both_linear ? 1e-12 : 1e-8;

  // orthonormal basis of u-perp and the projected bounding box
  std::vector<Vec> basis;
  if (n == 2) {
    Vec w(2);
    w << -u[1], u[0];
    basis.push_back(w);
  } else {
    Vec w1 = unit_orthogonal3(u);
    basis.push_back(w1);
    basis.push_back(cross3d(u, w1));
  }
  std::vector<double> halfw;
  for (const auto& w : basis) halfw.push_back(std::min(K1.support(w), K2.support(w)));

  // cell masks on the base grid
  int cells = (n == 2) ? m : m * m;
  std::vector<unsigned> mask(cells);

  auto center_of = [&](int i, int j, int reps, double offx, double offy) {
    Vec y = Vec::Zero(n);
    double cx = (-halfw[0]) + (2.0 * halfw[0]) * ((i + 0.5 + offx) / reps);
    y += cx * basis[0];
    if (n == 3) {
      double cy = (-halfw[1]) + (2.0 * halfw[1]) * ((j + 0.5 + offy) / reps);
      y += cy * basis[1];
    }
    return y;
  };

  parallel_for(static_cast<std::size_t>(cells), [&](std::size_t c) {
    int i = static_cast<int>(n == 2 ? c : c % m);
    int j = static_cast<int>(n == 2 ? 0 : c / m);
    mask[c] = classify(K1, K2, center_of(i, j, m, 0.0, 0.0), u, eq_tol);
  });

  // boundary cells: any neighbor with a different mask
  std::vector<char> boundary(cells, 0);
  for (int c = 0; c < cells; ++c) {
    int i = (n == 2) ? c : c % m;
    int j = (n == 2) ? 0 : c / m;
    auto differs = [&](int ii, int jj) {
      if (ii < 0 || ii >= m) return true;
      if (n == 3 && (jj < 0 || jj >= m)) return true;
      int cc = (n == 2) ? ii : jj * m + ii;
      return mask[cc] != mask[c];
    };
    if (differs(i - 1, j) || differs(i + 1, j) ||
        (n == 3 && (differs(i, j - 1) || differs(i, j + 1))))
      boundary[c] = 1;
  }

  double cell_measure = (n == 2) ? (2.0 * halfw[0] / m) : (2.0 * halfw[0] / m) * (2.0 * halfw[1] / m);
  std::vector<std::array<double, 4>> partial(cells, {0, 0, 0, 0});

  parallel_for(static_cast<std::size_t>(cells), [&](std::size_t c) {
    int i = static_cast<int>(n == 2 ? c : c % m);
    int j = static_cast<int>(n == 2 ? 0 : c / m);
    auto add = [&](unsigned msk, double measure) {
      for (int s = 0; s < 4; ++s)
        if (msk & (1u << s)) partial[c][s] += measure;
    };
    if (!boundary[c]) {
      add(mask[c], cell_measure);
      return;
    }
    // 4x refinement, two levels, on set-boundary cells
    for (int s1 = 0; s1 < 4; ++s1) {
      int i1 = (n == 2) ? s1 : s1 % 2;
      int j1 = (n == 2) ? 0 : s1 / 2;
      for (int s2 = 0; s2 < 4; ++s2) {
        int i2 = (n == 2) ? s2 : s2 % 2;
        int j2 = (n == 2) ? 0 : s2 / 2;
        double offx, offy = 0.0;
        if (n == 2) {
          offx = (i1 + (i2 + 0.5) / 4.0) / 4.0 - 0.5;
          (void)j1;
          (void)j2;
        } else {
          offx = (i1 + (i2 + 0.5) / 2.0) / 2.0 - 0.5;
          offy = (j1 + (j2 + 0.5) / 2.0) / 2.0 - 0.5;
        }
        unsigned sm = classify(K1, K2, center_of(i, j, m, offx, offy), u, eq_tol);
        add(sm, cell_measure / 16.0);
      }
    }
  });

  OneSidedDerivatives out;
  out.direction = u;
  std::vector<double> acc(cells);
  for (int s = 0; s < 4; ++s) {
    for (int c = 0; c < cells; ++c) acc[c] = partial[c][s];
    double v = pairwise_sum(acc);
    if (s == 0) out.c_plus_12 = v;
    if (s == 1) out.c_minus_12 = v;
    if (s == 2) out.c_plus_21 = v;
    if (s == 3) out.c_minus_21 = v;
  }
  out.forward = out.c_plus_12 - out.c_minus_21;
  out.backward = out.c_minus_12 - out.c_plus_21;
  return out;
}

// ---------------------------------------------------------------------------
// Eq. (1): gradient surface integrals

namespace {

// integrate f over the arcs of `owner` with the exact arclength element
template <typename F>
Vec integrate_arcs2d(const SmoothBoundary2D& bd, const std::vector<detail::LensArc>& arcs,
                     int owner, int panels, F&& integrand) {
  const auto& gl = GaussLegendre::order(16);
  std::vector<double> tx, ty;
  for (const auto& arc : arcs) {
    if (arc.owner != owner) continue;
    for (int p = 0; p < panels; ++p) {
      double a = arc.t0 + (arc.t1 - arc.t0) * p / panels;
      double b = arc.t0 + (arc.t1 - arc.t0) * (p + 1) / panels;
      for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        double t = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q];
        double w = 0.5 * (b - a) * gl.weights[q];
        double speed = bd.derivative(t).norm();
        Vec2 val = integrand(t);
        tx.push_back(w * speed * val.x());
        ty.push_back(w * speed * val.y());
      }
    }
  }
  Vec out(2);
  out << pairwise_sum(tx), pairwise_sum(ty);
  return out;
}

GradientResult grad_2d(const TranslateProblem& p, int resolution) {
  const Body& K = *p.body;
  Vec2 x2(p.x[0], p.x[1]);
  SmoothBoundary2D A(K, 1.0, Vec2(0, 0));
  SmoothBoundary2D B(K, p.tau, x2);
  LensGeometry geom = detail::translate_lens_geometry(K, p.tau, x2);

  GradientResult r;
  r.gradient = Vec::Zero(2);
  r.gradient_n_form = Vec::Zero(2);
  r.normal_integral = Vec::Zero(2);
  if (geom.empty) {
    r.flag = "outside support";
    return r;
  }
  if (geom.containment >= 0) return r;  // plateau: both integrals vanish

  int panels = std::max(4, resolution);
  // dF/dx_i = ∫_{K ∩ ∂(x+τK)} <M, e_i> dμ
  r.gradient = integrate_arcs2d(B, geom.arcs, 1, panels, [&](double t) { return B.unit_normal(t); });
  // = -∫_{(x+τK) ∩ ∂K} <N, e_i> dν
  Vec eq2 = integrate_arcs2d(A, geom.arcs, 0, panels, [&](double t) { return A.unit_normal(t); });
  r.normal_integral = eq2;
  r.gradient_n_form = -eq2;
  return r;
}

// 3D: adaptive icosphere quadrature of <M,e_i> over the translate-boundary
// patch inside K (and symmetrically for the N form).
struct PatchIntegrator {
  const Body* K;
  double scale;   // boundary of center + scale*K
  Vec center;
  const Body* other;       // membership test body
  double other_scale;
  Vec other_center;

  Vec boundary_point(const Vec& d) const { return center + scale * d / K->gauge(d); }
  bool inside(const Vec& y) const { return other->gauge((y - other_center) / other_scale) <= 1.0; }
  Vec normal(const Vec& d) const {
    Vec g = K->gauge_gradient(d);
    return g / g.norm();
  }

  Vec integrate(int level, int max_depth) const {
    DirectionGrid grid = DirectionGrid::icosphere(level);
    std::vector<Vec> vals(grid.faces.size());
    parallel_for(grid.faces.size(), [&](std::size_t f) {
      const auto& tri = grid.faces[f];
      vals[f] = triangle(grid.units[tri[0]], grid.units[tri[1]], grid.units[tri[2]], max_depth);
    });
    Vec out = Vec::Zero(3);
    std::vector<double> comp(vals.size());
    for (int i = 0; i < 3; ++i) {
      for (std::size_t f = 0; f < vals.size(); ++f) comp[f] = vals[f][i];
      out[i] = pairwise_sum(comp);
    }
    return out;
  }

  Vec triangle(const Vec& d0, const Vec& d1, const Vec& d2, int depth) const {
    Vec y0 = boundary_point(d0), y1 = boundary_point(d1), y2 = boundary_point(d2);
    int in = inside(y0) + inside(y1) + inside(y2);
    if (in == 0 && depth <= 0) return Vec::Zero(3);
    if ((in == 3 && depth <= -2) || depth <= -4 || (in != 0 && in != 3 && depth <= 0)) {
      // flat-triangle quadrature weighted by the inside vertex fraction
      double frac = in / 3.0;
      if (frac == 0.0) return Vec::Zero(3);
      Vec area_vec = 0.5 * cross3d(y1 - y0, y2 - y0);
      double area = area_vec.norm() * frac;
      Vec dm = (d0 + d1 + d2).normalized();
      return area * normal(dm);
    }
    Vec m01 = (d0 + d1).normalized();
    Vec m12 = (d1 + d2).normalized();
    Vec m20 = (d2 + d0).normalized();
    return triangle(d0, m01, m20, depth - 1) + triangle(d1, m12, m01, depth - 1) +
           triangle(d2, m20, m12, depth - 1) + triangle(m01, m12, m20, depth - 1);
  }
};

GradientResult grad_3d(const TranslateProblem& p, int resolution) {
  const Body& K = *p.body;
  double g = K.gauge(p.x);
  GradientResult r;
  r.gradient = Vec::Zero(3);
  r.gradient_n_form = Vec::Zero(3);
  r.normal_integral = Vec::Zero(3);
  if (g >= 1.0 + p.tau) {
    r.flag = "outside support";
    return r;
  }
  if (g <= std::abs(1.0 - p.tau) + 1e-12) return r;  // plateau

  int level = std::min(4, std::max(2, resolution));
  Vec zero = Vec::Zero(3);
  PatchIntegrator m_form{&K, p.tau, p.x, &K, 1.0, zero};
  r.gradient = m_form.integrate(level, 4);
  PatchIntegrator n_form{&K, 1.0, zero, &K, p.tau, p.x};
  Vec eq2 = n_form.integrate(level, 4);
  r.normal_integral = eq2;
  r.gradient_n_form = -eq2;
  return r;
}

}  // namespace

GradientResult grad_F(const TranslateProblem& p, int resolution) {
  const Body& K = *p.body;
  if (!K.smooth())
    throw std::invalid_argument(
        "grad_F: strictly convex smooth kinds only (use one_sided_derivative for polytopes)");
  if (p.x.norm() == 0.0) {
    GradientResult r;
    r.gradient = Vec::Zero(K.dim());
    r.gradient_n_form = Vec::Zero(K.dim());
    r.normal_integral = Vec::Zero(K.dim());
    r.flag = "origin";
    return r;
  }
  if (K.dim() == 2) return grad_2d(p, resolution);
  if (K.dim() == 3) return grad_3d(p, resolution);
  throw std::invalid_argument("grad_F: dimensions 2 and 3 only");
}

// ---------------------------------------------------------------------------
// Eq. (7): Hessian from the boundary crossing set

BoundaryIntersectionCurve boundary_intersection_curve(const TranslateProblem& p, int resolution) {
  const Body& K = *p.body;
  if (!K.smooth())
    throw std::invalid_argument("boundary_intersection_curve: smooth strictly convex kinds only");
  BoundaryIntersectionCurve curve;
  if (K.dim() == 2) {
    Vec2 x2(p.x[0], p.x[1]);
    SmoothBoundary2D A(K, 1.0, Vec2(0, 0));
    SmoothBoundary2D B(K, p.tau, x2);
    LensGeometry geom = detail::translate_lens_geometry(K, p.tau, x2, {}, std::max(resolution, 64));
    for (const auto& c : geom.crossings) {
      BoundaryCurvePoint pt;
      pt.point = Vec(2);
      pt.point << c.point.x(), c.point.y();
      Vec2 nn = A.unit_normal(c.theta_a);
      Vec2 mm = B.unit_normal(c.theta_b);
      pt.normal_body = Vec(2);
      pt.normal_body << nn.x(), nn.y();
      pt.normal_translate = Vec(2);
      pt.normal_translate << mm.x(), mm.y();
      pt.weight = 1.0;  // counting measure
      curve.points.push_back(pt);
    }
    return curve;
  }
  if (K.dim() == 3) {
    auto marched = detail::march_intersection_curve(K, p.tau, p.x, std::max(64, resolution));
    for (std::size_t i = 0; i < marched.points.size(); ++i) {
      BoundaryCurvePoint pt;
      pt.point = marched.points[i];
      Vec ng = K.gauge_gradient(pt.point);
      pt.normal_body = ng / ng.norm();
      Vec mg = K.gauge_gradient((pt.point - p.x) / p.tau);
      pt.normal_translate = mg / mg.norm();
      pt.weight = marched.weight(i);
      curve.points.push_back(pt);
    }
    return curve;
  }
  throw std::invalid_argument("boundary_intersection_curve: dimensions 2 and 3 only");
}

Mat hessian_F(const TranslateProblem& p, int resolution) {
  const Body& K = *p.body;
  int n = K.dim();
  if (!K.smooth()) throw std::invalid_argument("hessian_F: smooth strictly convex kinds only");
  double g = K.gauge(p.x);
  if (g >= 1.0 + p.tau) throw std::invalid_argument("hessian_F: F(x) = 0 outside the support set");
  if (p.x.norm() == 0.0) throw std::invalid_argument("hessian_F: x = 0 excluded");

  BoundaryIntersectionCurve curve = boundary_intersection_curve(p, resolution);
  Mat H = Mat::Zero(n, n);
  if (curve.points.empty()) return H;  // containment plateau

  std::vector<std::vector<double>> terms(n * n);
  for (const auto& pt : curve.points) {
    double dot = pt.normal_translate.dot(pt.normal_body);
    if (std::abs(dot) > 1.0 - kTangencyGuard)
      throw std::domain_error("ill-conditioned crossing");
    double denom = std::sqrt(1.0 - dot * dot);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double val = -0.5 *
                     (pt.normal_translate[j] * pt.normal_body[i] +
                      pt.normal_translate[i] * pt.normal_body[j]) /
                     denom * pt.weight;
        terms[i * n + j].push_back(val);
      }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) H(i, j) = pairwise_sum(terms[i * n + j]);
  return H;
}

}  // namespace convgeom
