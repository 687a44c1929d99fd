#include "convgeom/volume.hpp"

#include <algorithm>
#include <cmath>

#include "convgeom/curve3d.hpp"
#include "convgeom/lens2d.hpp"
#include "convgeom/parallel.hpp"
#include "convgeom/polygon2d.hpp"

namespace convgeom {

namespace {

using detail::AreaSandwich;
using detail::LensGeometry;
using detail::SmoothBoundary2D;

constexpr double kSlop = 1e-15;

std::vector<Vec2> shifted_scaled_polygon(const std::vector<Vec2>& verts, double s, const Vec2& c) {
  std::vector<Vec2> out;
  out.reserve(verts.size());
  for (const auto& v : verts) out.push_back(c + s * v);
  return out;
}

double polygon_scale(const std::vector<Vec2>& v) {
  double s = 1.0;
  for (const auto& p : v) s = std::max(s, p.lpNorm<Eigen::Infinity>());
  return s;
}

VolumeEstimate exact_poly2d_pair(const std::vector<Vec2>& pa, const std::vector<Vec2>& pb,
                                 double s, const Vec2& c) {
  ConvexPolygon A{pa};
  ConvexPolygon B{shifted_scaled_polygon(pb, s, c)};
  ConvexPolygon I = intersect_convex(A, B);
  VolumeEstimate est;
  est.method = VolumeMethodUsed::ExactPoly2D;
  est.value = I.area();
  double scale = std::max(polygon_scale(pa), polygon_scale(B.v.empty() ? pa : B.v));
  est.abs_error = kSlop * scale * scale * static_cast<double>(pa.size() + pb.size());
  return est;
}

// ---------------------------------------------------------------------------
// smooth 2D translate problem

VolumeEstimate smooth_lens_2d(const Body& K, double tau, const Vec2& x, const VolumeOptions& opts) {
  VolumeEstimate est;
  est.method = VolumeMethodUsed::ExactPoly2D;

  SmoothBoundary2D A(K, 1.0, Vec2(0, 0));
  SmoothBoundary2D B(K, tau, x);
  LensGeometry geom = detail::translate_lens_geometry(K, tau, x);
  if (geom.empty) {
    est.value = 0.0;
    est.abs_error = kSlop;
    return est;
  }

  int m = opts.poly_m;
  for (;;) {
    AreaSandwich sw = detail::lens_area_sandwich(A, B, geom, m);
    est.value = sw.mid();
    est.abs_error = sw.half_width() + kSlop;
    if (est.abs_error <= std::max(opts.tol, opts.rel_tol * std::abs(est.value))) return est;
    if (m >= opts.poly_m_max) break;
    m *= 2;
  }
  est.flag = "budget exceeded";
  return est;
}

// ---------------------------------------------------------------------------
// 3D halfspace polytopes: concatenate constraint lists and enumerate vertices.

struct Poly3 {
  Mat A;
  Vec b;
};

std::vector<Vec> poly3_vertices(const Poly3& p) {
  int m = static_cast<int>(p.A.rows());
  std::vector<Vec> verts;
  double scale = std::max(1.0, p.b.cwiseAbs().maxCoeff());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        Eigen::Matrix3d S;
        S.row(0) = p.A.row(i);
        S.row(1) = p.A.row(j);
        S.row(2) = p.A.row(k);
        if (std::abs(S.determinant()) < 1e-12) continue;
        Vec3 rhs(p.b[i], p.b[j], p.b[k]);
        Vec3 v = S.fullPivLu().solve(rhs);
        Vec x(3);
        x << v.x(), v.y(), v.z();
        if (((p.A * x - p.b).array() <= 1e-9 * scale).all()) {
          bool dup = false;
          for (const auto& w : verts)
            if ((w - x).lpNorm<Eigen::Infinity>() < 1e-9 * scale) {
              dup = true;
              break;
            }
          if (!dup) verts.push_back(x);
        }
      }
  return verts;
}

double poly3_volume(const Poly3& p, const std::vector<Vec>& verts) {
  if (verts.size() < 4) return 0.0;
  Vec c = Vec::Zero(3);
  for (const auto& v : verts) c += v;
  c /= static_cast<double>(verts.size());
  double scale = std::max(1.0, p.b.cwiseAbs().maxCoeff());
  std::vector<double> terms;
  for (int f = 0; f < p.A.rows(); ++f) {
    std::vector<Vec> on_face;
    for (const auto& v : verts)
      if (std::abs(p.A.row(f).dot(v) - p.b[f]) < 1e-8 * scale) on_face.push_back(v);
    if (on_face.size() < 3) continue;
    Vec fc = Vec::Zero(3);
    for (const auto& v : on_face) fc += v;
    fc /= static_cast<double>(on_face.size());
    Vec n = p.A.row(f).transpose().normalized();
    Vec t1 = unit_orthogonal3(n);
    Vec t2 = cross3d(n, t1);
    std::sort(on_face.begin(), on_face.end(), [&](const Vec& a, const Vec& b) {
      return std::atan2(t2.dot(a - fc), t1.dot(a - fc)) < std::atan2(t2.dot(b - fc), t1.dot(b - fc));
    });
    for (std::size_t i = 0; i < on_face.size(); ++i) {
      const Vec& a = on_face[i];
      const Vec& b = on_face[(i + 1) % on_face.size()];
      terms.push_back(cross3d(a - c, b - c).dot(fc - c) / 6.0);
    }
  }
  return std::abs(pairwise_sum(terms));
}

std::optional<Poly3> translate_poly3(const Body& K, double tau, const Vec& x) {
  auto hs = K.as_halfspaces();
  if (!hs || K.dim() != 3) return std::nullopt;
  const auto& [A0, b0] = *hs;
  Poly3 p;
  int m = static_cast<int>(A0.rows());
  p.A.resize(2 * m, 3);
  p.b.resize(2 * m);
  p.A.topRows(m) = A0;
  p.b.head(m) = b0;
  p.A.bottomRows(m) = A0;
  p.b.tail(m) = tau * b0 + A0 * x;
  return p;
}

// ---------------------------------------------------------------------------
// Monte Carlo: uniform over the bounding box of K, per-batch substreams so the
// result is independent of worker count.

constexpr long long kBatch = 65536;

struct McResult {
  double value, abs_error;
  long long samples;
};

McResult mc_volume(const Body& K, double tau, const Vec& x, long long n_samples,
                   std::uint64_t seed) {
  int n = K.dim();
  Vec half(n);
  for (int i = 0; i < n; ++i) half[i] = K.support(Vec::Unit(n, i));
  double box = 1.0;
  for (int i = 0; i < n; ++i) box *= 2.0 * half[i];

  long long batches = (n_samples + kBatch - 1) / kBatch;
  n_samples = batches * kBatch;
  std::vector<long long> hits(batches, 0);
  parallel_for(static_cast<std::size_t>(batches), [&](std::size_t bi) {
    Rng rng(substream_seed(seed, bi));
    Vec y(n), z(n);
    long long h = 0;
    for (long long s = 0; s < kBatch; ++s) {
      for (int i = 0; i < n; ++i) y[i] = rng.uniform(-half[i], half[i]);
      if (K.gauge(y) > 1.0) continue;
      z = (y - x) / tau;
      if (K.gauge(z) <= 1.0) ++h;
    }
    hits[bi] = h;
  });
  long long total = 0;
  for (long long h : hits) total += h;

  double p = static_cast<double>(total) / static_cast<double>(n_samples);
  McResult r;
  r.value = box * p;
  r.abs_error = 1.96 * box * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n_samples));
  if (total == 0) r.abs_error = 1.96 * box * std::sqrt(1.0 / static_cast<double>(n_samples));
  r.samples = n_samples;
  return r;
}

VolumeEstimate mc_estimate(const Body& K, double tau, const Vec& x, const VolumeOptions& opts) {
  VolumeEstimate est;
  est.method = VolumeMethodUsed::MonteCarlo;
  // pilot to size the run for the requested tolerance
  long long pilot = 4 * kBatch;
  McResult r = mc_volume(K, tau, x, pilot, opts.seed);
  double target = std::max(opts.tol, opts.rel_tol * std::abs(r.value));
  if (target > 0 && r.abs_error > target) {
    double factor = (r.abs_error / target) * (r.abs_error / target);
    long long want = static_cast<long long>(std::ceil(pilot * std::min(factor * 1.2, 1e9)));
    want = std::min(want, opts.mc_max_samples);
    if (want > pilot) r = mc_volume(K, tau, x, want, opts.seed);
  }
  est.value = r.value;
  est.abs_error = r.abs_error;
  est.samples = r.samples;
  double final_target = std::max(opts.tol, opts.rel_tol * std::abs(est.value));
  if (est.abs_error > final_target) est.flag = "budget exceeded";
  return est;
}

}  // namespace

std::string method_used_name(VolumeMethodUsed m) {
  switch (m) {
    case VolumeMethodUsed::ExactPoly2D: return "exact_poly_2d";
    case VolumeMethodUsed::ExactPoly3D: return "exact_poly_3d";
    case VolumeMethodUsed::MonteCarlo: return "mc";
  }
  return "?";
}

VolumeEstimate intersection_volume(const TranslateProblem& p, VolumeMethod method,
                                   const VolumeOptions& opts) {
  const Body& K = *p.body;
  if (p.tau <= 0) throw std::invalid_argument("intersection_volume: tau must be positive");
  if (p.x.size() != K.dim()) throw std::invalid_argument("intersection_volume: x dimension mismatch");
  if (!p.x.allFinite()) throw std::invalid_argument("intersection_volume: x must be finite");

  // support identity: {F > 0} = {||x||_K < 1 + tau}
  double g = K.gauge(p.x);
  if (g >= 1.0 + p.tau) {
    VolumeEstimate est;
    est.method = K.dim() == 2 ? VolumeMethodUsed::ExactPoly2D : VolumeMethodUsed::ExactPoly3D;
    if (method == VolumeMethod::MonteCarlo) est.method = VolumeMethodUsed::MonteCarlo;
    est.value = 0.0;
    est.abs_error = 0.0;
    return est;
  }

  bool want_exact = method != VolumeMethod::MonteCarlo;
  if (want_exact && K.dim() == 2) {
    if (auto poly = K.as_polygon2d()) {
      Vec2 x2(p.x[0], p.x[1]);
      return exact_poly2d_pair(*poly, *poly, p.tau, x2);
    }
    if (K.smooth()) return smooth_lens_2d(K, p.tau, Vec2(p.x[0], p.x[1]), opts);
    if (method == VolumeMethod::Exact)
      throw std::invalid_argument("exact method unavailable for this 2D body kind");
  }
  if (want_exact && K.dim() == 3) {
    if (auto poly = translate_poly3(K, p.tau, p.x)) {
      auto verts = poly3_vertices(*poly);
      VolumeEstimate est;
      est.method = VolumeMethodUsed::ExactPoly3D;
      est.value = poly3_volume(*poly, verts);
      double scale = std::max(1.0, poly->b.cwiseAbs().maxCoeff());
      est.abs_error = 1e-10 * scale * scale * scale;
      return est;
    }
    if (method == VolumeMethod::Exact)
      throw std::invalid_argument("exact method unavailable for smooth 3D bodies");
  }
  if (method == VolumeMethod::Exact)
    throw std::invalid_argument("exact method unavailable for this body/dimension");
  return mc_estimate(K, p.tau, p.x, opts);
}

VolumeEstimate body_volume(const BodyPtr& body, VolumeMethod method, const VolumeOptions& opts) {
  TranslateProblem p{body, 1.0, Vec::Zero(body->dim())};
  return intersection_volume(p, method, opts);
}

double width_of_intersection(const TranslateProblem& p, const Vec& direction) {
  const Body& K = *p.body;
  double g = K.gauge(p.x);
  if (g >= 1.0 + p.tau) throw std::domain_error("empty intersection");
  Vec dir = direction / direction.norm();

  auto polytope_width = [&](const std::vector<Vec>& verts) {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& v : verts) {
      double s = dir.dot(v);
      hi = std::max(hi, s);
      lo = std::min(lo, s);
    }
    return hi - lo;
  };

  if (K.dim() == 2) {
    if (auto poly = K.as_polygon2d()) {
      ConvexPolygon A{*poly};
      ConvexPolygon B{shifted_scaled_polygon(*poly, p.tau, Vec2(p.x[0], p.x[1]))};
      ConvexPolygon I = intersect_convex(A, B);
      if (I.empty()) throw std::domain_error("empty intersection");
      std::vector<Vec> verts;
      for (const auto& q : I.v) {
        Vec v(2);
        v << q.x(), q.y();
        verts.push_back(v);
      }
      return polytope_width(verts);
    }
  }
  if (K.dim() == 3) {
    if (auto poly = translate_poly3(K, p.tau, p.x)) {
      auto verts = poly3_vertices(*poly);
      if (verts.empty()) throw std::domain_error("empty intersection");
      return polytope_width(verts);
    }
  }
  if (!K.smooth()) throw std::invalid_argument("width_of_intersection: unsupported body kind");

  // smooth kinds: sup over the lens of <y,dir> is attained either at a body
  // support point that lies in the other body, or on the boundary crossing set
  auto one_side = [&](const Vec& d) {
    double best = -std::numeric_limits<double>::infinity();
    bool found = false;
    Vec yk = K.support_point(d);
    if (K.gauge((yk - p.x) / p.tau) <= 1.0 + 1e-12) {
      best = std::max(best, d.dot(yk));
      found = true;
    }
    Vec yt = p.x + p.tau * K.support_point(d);
    if (K.gauge(yt) <= 1.0 + 1e-12) {
      best = std::max(best, d.dot(yt));
      found = true;
    }
    if (K.dim() == 2) {
      SmoothBoundary2D A(K, 1.0, Vec2(0, 0));
      SmoothBoundary2D B(K, p.tau, Vec2(p.x[0], p.x[1]));
      double focus = std::atan2(-p.x[1], -p.x[0]);
      LensGeometry geom = detail::locate_lens(A, B, focus);
      for (const auto& c : geom.crossings) {
        best = std::max(best, d[0] * c.point.x() + d[1] * c.point.y());
        found = true;
      }
      if (geom.containment == 0) {
        best = std::max(best, K.support(d));
        found = true;
      }
      if (geom.containment == 1) {
        best = std::max(best, d.dot(p.x) + p.tau * K.support(d));
        found = true;
      }
    } else {
      auto curve = detail::march_intersection_curve(K, p.tau, p.x, 512);
      for (const auto& pt : curve.points) {
        best = std::max(best, d.dot(pt));
        found = true;
      }
      if (!found) {
        // containment
        if (std::min(1.0, p.tau) == p.tau)
          best = d.dot(p.x) + p.tau * K.support(d);
        else
          best = K.support(d);
        found = true;
      }
    }
    if (!found) throw std::domain_error("empty intersection");
    return best;
  };
  return one_side(dir) + one_side(-dir);
}

namespace detail {

VolumeEstimate pair_intersection_area2d(const BodyPtr& k1, const BodyPtr& k2, const Vec2& offset,
                                        const VolumeOptions& opts) {
  const Body& A = *k1;
  const Body& B = *k2;
  if (A.dim() != 2 || B.dim() != 2)
    throw std::invalid_argument("pair_intersection_area2d: 2D bodies only");
  auto pa = A.as_polygon2d();
  auto pb = B.as_polygon2d();
  if (pa && pb) return exact_poly2d_pair(*pa, *pb, 1.0, offset);

  SmoothBoundary2D bA(A, 1.0, Vec2(0, 0));
  SmoothBoundary2D bB(B, 1.0, offset);
  VolumeEstimate est;
  est.method = VolumeMethodUsed::ExactPoly2D;

  if (pa || pb) {
    // mixed: polygonize the smooth one and clip
    int m = opts.poly_m;
    for (;;) {
      ConvexPolygon smooth_in, smooth_out;
      const auto& smooth_bd = pa ? bB : bA;
      AreaSandwich dummy;  // build inscribed polygon + tangent circumscribed
      auto pts = sample_boundary(smooth_bd, m);
      smooth_in.v = pts;
      ConvexPolygon other{pa ? *pa : shifted_scaled_polygon(*pb, 1.0, offset)};
      if (pa) other.v = *pa;
      ConvexPolygon ins = intersect_convex(smooth_in, other);
      // circumscribed polygon of the smooth body
      std::vector<Vec2> circ_pts;
      for (int k = 0; k < m; ++k) {
        double t0 = 2.0 * kPi * k / m;
        double t1 = 2.0 * kPi * (k + 1) / m;
        Vec2 n0 = smooth_bd.unit_normal(t0), n1 = smooth_bd.unit_normal(t1);
        Vec2 q0 = smooth_bd.point(t0), q1 = smooth_bd.point(t1);
        double det = cross2(n0, n1);
        if (std::abs(det) < 1e-13) {
          circ_pts.push_back(q0);
          continue;
        }
        double c0 = n0.dot(q0), c1 = n1.dot(q1);
        circ_pts.emplace_back((c0 * n1.y() - c1 * n0.y()) / det, (n0.x() * c1 - n1.x() * c0) / det);
      }
      ConvexPolygon smooth_circ{circ_pts};
      ConvexPolygon outp = intersect_convex(smooth_circ, other);
      est.value = 0.5 * (ins.area() + outp.area());
      est.abs_error = 0.5 * (outp.area() - ins.area()) + kSlop;
      if (est.abs_error <= std::max(opts.tol, opts.rel_tol * std::abs(est.value))) return est;
      if (m >= opts.poly_m_max) break;
      m *= 2;
    }
    est.flag = "budget exceeded";
    return est;
  }

  LensGeometry geom = locate_lens(bA, bB, std::atan2(-offset.y(), -offset.x()));
  if (geom.empty) {
    est.value = 0.0;
    est.abs_error = kSlop;
    return est;
  }
  int m = opts.poly_m;
  for (;;) {
    AreaSandwich sw = lens_area_sandwich(bA, bB, geom, m);
    est.value = sw.mid();
    est.abs_error = sw.half_width() + kSlop;
    if (est.abs_error <= std::max(opts.tol, opts.rel_tol * std::abs(est.value))) return est;
    if (m >= opts.poly_m_max) break;
    m *= 2;
  }
  est.flag = "budget exceeded";
  return est;
}

}  // namespace detail

}  // namespace convgeom
