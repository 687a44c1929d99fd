#include "convgeom/body.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <map>

namespace convgeom {

namespace {
constexpr double kBoundaryTol = 1e-6;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

std::string body_kind_name(BodyKind k) {
  switch (k) {
    case BodyKind::Ellipsoid: return "ellipsoid";
    case BodyKind::PBall: return "pball";
    case BodyKind::Polygon2D: return "polygon";
    case BodyKind::Halfspaces: return "halfspaces";
    case BodyKind::LinearImage: return "linear";
  }
  return "?";
}

NormalResult Body::outer_normal(const Vec& y) const {
  if (std::abs(gauge(y) - 1.0) > kBoundaryTol)
    throw std::invalid_argument("outer_normal: point is not on the boundary");
  Vec g = gauge_gradient(y);
  double n = g.norm();
  require(n > 0, "outer_normal: degenerate gradient");
  return NormalResult{g / n, true, -1};
}

double Body::defining_value(const Vec&) const {
  throw std::logic_error("defining_value: no C2 defining function for this kind");
}
Vec Body::defining_gradient(const Vec&) const {
  throw std::logic_error("defining_gradient: no C2 defining function for this kind");
}
Mat Body::defining_hessian(const Vec&) const {
  throw std::logic_error("defining_hessian: no C2 defining function for this kind");
}

// Gauss-Kronecker curvature of the level set {g = 0} at y from the bordered
// Hessian: kappa = -det([[H, g'], [g'^T, 0]]) / |g'|^(n+1).
std::optional<double> Body::analytic_curvature(const Vec& y) const {
  if (!has_c2_defining()) return std::nullopt;
  if (std::abs(gauge(y) - 1.0) > kBoundaryTol)
    throw std::invalid_argument("analytic_curvature: point is not on the boundary");
  int n = dim();
  Mat B(n + 1, n + 1);
  B.topLeftCorner(n, n) = defining_hessian(y);
  Vec g = defining_gradient(y);
  B.topRightCorner(n, 1) = g;
  B.bottomLeftCorner(1, n) = g.transpose();
  B(n, n) = 0.0;
  double norm = g.norm();
  if (norm <= 0) return std::nullopt;
  double kappa = -B.determinant() / std::pow(norm, n + 1);
  return std::max(kappa, 0.0);
}

// ---------------------------------------------------------------------------
// Ellipsoid: ||x||_K = sqrt(<x, Q x>)

class EllipsoidBody final : public Body {
 public:
  explicit EllipsoidBody(Mat Q) : q_(std::move(Q)) {
    require(q_.rows() == q_.cols() && q_.rows() >= 2, "ellipsoid: Q must be square, n >= 2");
    require(q_.isApprox(q_.transpose(), 1e-12), "ellipsoid: Q must be symmetric");
    q_ = 0.5 * (q_ + q_.transpose());
    Eigen::LLT<Mat> llt(q_);
    require(llt.info() == Eigen::Success, "ellipsoid: Q must be positive definite");
    qinv_ = q_.inverse();
    det_q_ = q_.determinant();
    require(det_q_ > 0, "ellipsoid: Q must be positive definite");
  }

  BodyKind kind() const override { return BodyKind::Ellipsoid; }
  int dim() const override { return static_cast<int>(q_.rows()); }

  double gauge(const Vec& x) const override { return std::sqrt(std::max(0.0, x.dot(q_ * x))); }

  Vec gauge_gradient(const Vec& x) const override {
    double g = gauge(x);
    require(g > 0, "gauge_gradient at 0");
    return (q_ * x) / g;
  }

  double support(const Vec& u) const override { return std::sqrt(std::max(0.0, u.dot(qinv_ * u))); }

  Vec support_point(const Vec& u) const override {
    Vec w = qinv_ * u;
    double h = std::sqrt(std::max(0.0, u.dot(w)));
    require(h > 0, "support_point: u = 0");
    return w / h;
  }

  bool smooth() const override { return true; }
  bool has_c2_defining() const override { return true; }
  double defining_value(const Vec& x) const override { return x.dot(q_ * x) - 1.0; }
  Vec defining_gradient(const Vec& x) const override { return 2.0 * (q_ * x); }
  Mat defining_hessian(const Vec&) const override { return 2.0 * q_; }

  std::optional<double> analytic_curvature(const Vec& y) const override {
    if (std::abs(gauge(y) - 1.0) > kBoundaryTol)
      throw std::invalid_argument("analytic_curvature: point is not on the boundary");
    // det Q / |Q y|^(n+1), the bordered-Hessian determinant in closed form
    return det_q_ / std::pow((q_ * y).norm(), dim() + 1);
  }

  std::optional<double> analytic_volume() const override {
    return unit_ball_volume(dim()) / std::sqrt(det_q_);
  }

  const Mat& Q() const { return q_; }

  SpecNode spec_node() const override {
    SpecNode n;
    n.kind = BodyKind::Ellipsoid;
    n.mat = q_;
    return n;
  }

 private:
  Mat q_, qinv_;
  double det_q_;
};

// ---------------------------------------------------------------------------
// p-ball: sum |x_i / s_i|^p <= 1

class PBallBody final : public Body {
 public:
  PBallBody(double p, Vec scale) : p_(p), s_(std::move(scale)) {
    require(p_ >= 1.0 && std::isfinite(p_), "pball: p must satisfy 1 <= p < inf");
    require(s_.size() >= 2, "pball: dimension >= 2");
    require((s_.array() > 0).all(), "pball: scales must be positive");
    q_ = (p_ > 1.0) ? p_ / (p_ - 1.0) : std::numeric_limits<double>::infinity();
  }

  BodyKind kind() const override { return BodyKind::PBall; }
  int dim() const override { return static_cast<int>(s_.size()); }

  double gauge(const Vec& x) const override { return scaled_norm(x.cwiseQuotient(s_), p_); }

  Vec gauge_gradient(const Vec& x) const override {
    double g = gauge(x);
    require(g > 0, "gauge_gradient at 0");
    Vec out(dim());
    if (p_ == 1.0) {
      for (int i = 0; i < dim(); ++i) out[i] = sgn(x[i]) / s_[i];
      return out;
    }
    for (int i = 0; i < dim(); ++i) {
      double r = std::abs(x[i] / s_[i]) / g;
      out[i] = std::pow(r, p_ - 1.0) * sgn(x[i]) / s_[i];
    }
    return out;
  }

  double support(const Vec& u) const override {
    Vec w = u.cwiseProduct(s_);
    if (p_ == 1.0) return w.cwiseAbs().maxCoeff();
    return scaled_norm(w, q_);
  }

  Vec support_point(const Vec& u) const override {
    Vec w = u.cwiseProduct(s_);
    Vec out = Vec::Zero(dim());
    if (p_ == 1.0) {
      int best = 0;
      for (int i = 1; i < dim(); ++i)
        if (std::abs(w[i]) > std::abs(w[best])) best = i;
      out[best] = sgn(u[best]) * s_[best];
      return out;
    }
    double wmax = w.cwiseAbs().maxCoeff();
    require(wmax > 0, "support_point: u = 0");
    double denom = 0.0;
    for (int i = 0; i < dim(); ++i) denom += std::pow(std::abs(w[i]) / wmax, q_);
    denom = std::pow(denom, (q_ - 1.0) / q_);
    for (int i = 0; i < dim(); ++i)
      out[i] = s_[i] * sgn(u[i]) * std::pow(std::abs(w[i]) / wmax, q_ - 1.0) / denom;
    return out;
  }

  bool smooth() const override { return p_ > 1.0; }
  bool has_c2_defining() const override { return p_ >= 2.0; }

  double defining_value(const Vec& x) const override {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += std::pow(std::abs(x[i] / s_[i]), p_);
    return s - 1.0;
  }
  Vec defining_gradient(const Vec& x) const override {
    Vec g(dim());
    for (int i = 0; i < dim(); ++i)
      g[i] = p_ * std::pow(std::abs(x[i]), p_ - 1.0) * sgn(x[i]) / std::pow(s_[i], p_);
    return g;
  }
  Mat defining_hessian(const Vec& x) const override {
    Mat h = Mat::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      h(i, i) = p_ * (p_ - 1.0) * std::pow(std::abs(x[i]), p_ - 2.0) / std::pow(s_[i], p_);
    return h;
  }

  std::optional<double> analytic_volume() const override {
    double g1 = std::tgamma(1.0 + 1.0 / p_);
    return s_.prod() * std::pow(2.0 * g1, dim()) / std::tgamma(1.0 + dim() / p_);
  }

  double p() const { return p_; }
  const Vec& scale() const { return s_; }

  SpecNode spec_node() const override {
    SpecNode n;
    n.kind = BodyKind::PBall;
    n.scalar = p_;
    n.vec = s_;
    return n;
  }

 private:
  static double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }
  static double scaled_norm(const Vec& r, double e) {
    double m = r.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < r.size(); ++i) s += std::pow(std::abs(r[i]) / m, e);
    return m * std::pow(s, 1.0 / e);
  }

  double p_, q_;
  Vec s_;
};

// ---------------------------------------------------------------------------
// 2D polygon, counterclockwise vertex list with exact +/- pairing.

class Polygon2DBody final : public Body {
 public:
  explicit Polygon2DBody(std::vector<Vec2> verts) : v_(std::move(verts)) {
    std::size_t m = v_.size();
    require(m >= 4 && m % 2 == 0, "polygon: need an even vertex count >= 4");
    // exact +/- pairing: v[i + m/2] == -v[i]
    for (std::size_t i = 0; i < m / 2; ++i)
      require(v_[i + m / 2].x() == -v_[i].x() && v_[i + m / 2].y() == -v_[i].y(),
              "polygon: vertices must come in exact +/- pairs (v[i+m/2] = -v[i])");
    double scale = 0.0;
    for (auto& p : v_) scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
    // ccw and convex
    area_ = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Vec2& a = v_[i];
      const Vec2& b = v_[(i + 1) % m];
      const Vec2& c = v_[(i + 2) % m];
      double turn = cross2(b - a, c - b);
      require(turn > -1e-12 * scale * scale, "polygon: vertices must be convex ccw");
      area_ += 0.5 * cross2(a, b);
    }
    require(area_ > 0, "polygon: vertex order must be counterclockwise");
    // halfspace form; b_i > 0 iff origin interior
    normals_.resize(m);
    offsets_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      Vec2 e = v_[(i + 1) % m] - v_[i];
      Vec2 a(e.y(), -e.x());
      normals_[i] = a;
      offsets_[i] = a.dot(v_[i]);
      require(offsets_[i] > 0, "polygon: origin must be interior");
    }
  }

  BodyKind kind() const override { return BodyKind::Polygon2D; }
  int dim() const override { return 2; }

  double gauge(const Vec& x) const override {
    Vec2 p(x[0], x[1]);
    double g = 0.0;
    for (std::size_t i = 0; i < normals_.size(); ++i)
      g = std::max(g, normals_[i].dot(p) / offsets_[i]);
    return std::max(g, 0.0);
  }

  Vec gauge_gradient(const Vec& x) const override { return active_face_gradient(x).first; }

  double support(const Vec& u) const override {
    Vec2 d(u[0], u[1]);
    double h = v_[0].dot(d);
    for (std::size_t i = 1; i < v_.size(); ++i) h = std::max(h, v_[i].dot(d));
    return h;
  }

  Vec support_point(const Vec& u) const override {
    Vec2 d(u[0], u[1]);
    std::size_t best = 0;
    double hv = v_[0].dot(d);
    for (std::size_t i = 1; i < v_.size(); ++i) {
      double s = v_[i].dot(d);
      if (s > hv + 1e-15 * (1.0 + std::abs(hv))) {
        hv = s;
        best = i;
      }
    }
    Vec out(2);
    out << v_[best].x(), v_[best].y();
    return out;
  }

  NormalResult outer_normal(const Vec& y) const override {
    if (std::abs(gauge(y) - 1.0) > kBoundaryTol)
      throw std::invalid_argument("outer_normal: point is not on the boundary");
    auto [grad, info] = active_face_gradient(y);
    Vec n = grad / grad.norm();
    return NormalResult{n, info.second, info.first};
  }

  bool smooth() const override { return false; }
  std::optional<double> analytic_volume() const override { return area_; }
  std::optional<std::vector<Vec2>> as_polygon2d() const override { return v_; }

  const std::vector<Vec2>& vertices() const { return v_; }

  SpecNode spec_node() const override {
    SpecNode n;
    n.kind = BodyKind::Polygon2D;
    n.verts = v_;
    return n;
  }

 private:
  // active face (lowest index on ties) and uniqueness flag
  std::pair<Vec, std::pair<int, bool>> active_face_gradient(const Vec& x) const {
    Vec2 p(x[0], x[1]);
    double best = -1.0;
    int arg = 0;
    for (std::size_t i = 0; i < normals_.size(); ++i) {
      double r = normals_[i].dot(p) / offsets_[i];
      if (r > best + 1e-12) {
        best = r;
        arg = static_cast<int>(i);
      }
    }
    bool unique = true;
    for (std::size_t i = 0; i < normals_.size(); ++i) {
      if (static_cast<int>(i) == arg) continue;
      if (normals_[i].dot(p) / offsets_[i] > best - 1e-12) unique = false;
    }
    Vec g(2);
    g << normals_[arg].x() / offsets_[arg], normals_[arg].y() / offsets_[arg];
    return {g, {arg, unique}};
  }

  std::vector<Vec2> v_;
  std::vector<Vec2> normals_;
  std::vector<double> offsets_;
  double area_ = 0.0;
};

// ---------------------------------------------------------------------------
// n-dimensional halfspace polytope <a_i, x> <= b_i with exact +/- row pairs.

namespace {

// Enumerate vertices of {Ax <= b} by n-subsets of active constraints.
// Desk-scale only; row counts beyond ~60 are rejected upstream.
std::vector<Vec> enumerate_vertices(const Mat& A, const Vec& b) {
  int m = static_cast<int>(A.rows());
  int n = static_cast<int>(A.cols());
  std::vector<Vec> verts;
  std::vector<int> idx(n);
  std::vector<int> comb(n);
  for (int i = 0; i < n; ++i) comb[i] = i;
  auto advance = [&]() -> bool {
    int k = n - 1;
    while (k >= 0 && comb[k] == m - n + k) --k;
    if (k < 0) return false;
    ++comb[k];
    for (int j = k + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
    return true;
  };
  double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  do {
    Mat S(n, n);
    Vec rhs(n);
    for (int i = 0; i < n; ++i) {
      S.row(i) = A.row(comb[i]);
      rhs[i] = b[comb[i]];
    }
    Eigen::FullPivLU<Mat> lu(S);
    if (!lu.isInvertible()) continue;
    Vec x = lu.solve(rhs);
    if (((A * x - b).array() <= 1e-9 * scale).all()) {
      bool dup = false;
      for (const auto& v : verts)
        if ((v - x).lpNorm<Eigen::Infinity>() < 1e-9 * scale) {
          dup = true;
          break;
        }
      if (!dup) verts.push_back(x);
    }
  } while (advance());
  return verts;
}

// Volume of conv(vertices) by fanning ordered faces from the centroid.
double polytope_volume(const Mat& A, const Vec& b, const std::vector<Vec>& verts) {
  int n = static_cast<int>(A.cols());
  if (verts.empty()) return 0.0;
  Vec c = Vec::Zero(n);
  for (const auto& v : verts) c += v;
  c /= static_cast<double>(verts.size());
  double scale = std::max(1.0, b.cwiseAbs().maxCoeff());

  if (n == 2) {
    std::vector<Vec2> pts;
    for (const auto& v : verts) pts.emplace_back(v[0], v[1]);
    std::sort(pts.begin(), pts.end(), [&](const Vec2& p, const Vec2& q) {
      return std::atan2(p.y() - c[1], p.x() - c[0]) < std::atan2(q.y() - c[1], q.x() - c[0]);
    });
    double area = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      area += 0.5 * cross2(pts[i] - Vec2(c[0], c[1]), pts[(i + 1) % pts.size()] - Vec2(c[0], c[1]));
    return std::abs(area);
  }
  if (n != 3) throw std::invalid_argument("polytope volume: dimensions 2 and 3 only");

  double vol = 0.0;
  for (int f = 0; f < A.rows(); ++f) {
    std::vector<Vec> on_face;
    for (const auto& v : verts)
      if (std::abs(A.row(f).dot(v) - b[f]) < 1e-8 * scale) on_face.push_back(v);
    if (on_face.size() < 3) continue;
    Vec fc = Vec::Zero(3);
    for (const auto& v : on_face) fc += v;
    fc /= static_cast<double>(on_face.size());
    Vec normal = A.row(f).transpose().normalized();
    Vec t1 = unit_orthogonal3(normal);
    Vec t2 = cross3d(normal, t1);
    std::sort(on_face.begin(), on_face.end(), [&](const Vec& p, const Vec& q) {
      return std::atan2(t2.dot(p - fc), t1.dot(p - fc)) < std::atan2(t2.dot(q - fc), t1.dot(q - fc));
    });
    for (std::size_t i = 0; i < on_face.size(); ++i) {
      const Vec& p = on_face[i];
      const Vec& q = on_face[(i + 1) % on_face.size()];
      vol += cross3d(p - c, q - c).dot(fc - c) / 6.0;
    }
  }
  return std::abs(vol);
}

}  // namespace

class HalfspaceBody final : public Body {
 public:
  HalfspaceBody(Mat A, Vec b) : a_(std::move(A)), b_(std::move(b)) {
    int m = static_cast<int>(a_.rows());
    require(m == b_.size(), "halfspaces: A rows must match b size");
    require(a_.cols() >= 2, "halfspaces: dimension >= 2");
    require(m >= 2 * a_.cols() && m % 2 == 0, "halfspaces: need an even count covering all axes");
    require(m <= 64, "halfspaces: row count beyond desk scale (max 64)");
    require((b_.array() > 0).all(), "halfspaces: origin must be interior (b > 0)");
    for (int i = 0; i < m / 2; ++i) {
      require((a_.row(i + m / 2).array() == -a_.row(i).array()).all() && b_[i + m / 2] == b_[i],
              "halfspaces: rows must come in exact +/- pairs (row i+m/2 = -row i, same b)");
    }
    verts_ = enumerate_vertices(a_, b_);
    require(!verts_.empty(), "halfspaces: empty or unbounded polytope");
    volume_ = polytope_volume(a_, b_, verts_);
    require(volume_ > 0, "halfspaces: degenerate polytope");
  }

  BodyKind kind() const override { return BodyKind::Halfspaces; }
  int dim() const override { return static_cast<int>(a_.cols()); }

  double gauge(const Vec& x) const override {
    double g = 0.0;
    for (int i = 0; i < a_.rows(); ++i) g = std::max(g, a_.row(i).dot(x) / b_[i]);
    return std::max(g, 0.0);
  }

  Vec gauge_gradient(const Vec& x) const override {
    int arg = active_face(x);
    return a_.row(arg).transpose() / b_[arg];
  }

  double support(const Vec& u) const override {
    double h = verts_[0].dot(u);
    for (const auto& v : verts_) h = std::max(h, v.dot(u));
    return h;
  }

  Vec support_point(const Vec& u) const override {
    std::size_t best = 0;
    double hv = verts_[0].dot(u);
    for (std::size_t i = 1; i < verts_.size(); ++i) {
      double s = verts_[i].dot(u);
      if (s > hv + 1e-15 * (1.0 + std::abs(hv))) {
        hv = s;
        best = i;
      }
    }
    return verts_[best];
  }

  NormalResult outer_normal(const Vec& y) const override {
    if (std::abs(gauge(y) - 1.0) > kBoundaryTol)
      throw std::invalid_argument("outer_normal: point is not on the boundary");
    int arg = active_face(y);
    double ga = a_.row(arg).dot(y) / b_[arg];
    bool unique = true;
    for (int i = 0; i < a_.rows(); ++i)
      if (i != arg && a_.row(i).dot(y) / b_[i] > ga - 1e-12) unique = false;
    return NormalResult{a_.row(arg).transpose().normalized(), unique, arg};
  }

  bool smooth() const override { return false; }
  std::optional<double> analytic_volume() const override { return volume_; }

  std::optional<std::vector<Vec2>> as_polygon2d() const override {
    if (dim() != 2) return std::nullopt;
    Vec c = Vec::Zero(2);
    std::vector<Vec2> pts;
    for (const auto& v : verts_) pts.emplace_back(v[0], v[1]);
    std::sort(pts.begin(), pts.end(),
              [](const Vec2& p, const Vec2& q) { return std::atan2(p.y(), p.x()) < std::atan2(q.y(), q.x()); });
    return pts;
  }
  std::optional<std::pair<Mat, Vec>> as_halfspaces() const override { return std::make_pair(a_, b_); }

  const std::vector<Vec>& vertices() const { return verts_; }

  SpecNode spec_node() const override {
    SpecNode n;
    n.kind = BodyKind::Halfspaces;
    n.mat = a_;
    n.vec = b_;
    return n;
  }

 private:
  int active_face(const Vec& x) const {
    double best = -1.0;
    int arg = 0;
    for (int i = 0; i < a_.rows(); ++i) {
      double r = a_.row(i).dot(x) / b_[i];
      if (r > best + 1e-12) {
        best = r;
        arg = i;
      }
    }
    return arg;
  }

  Mat a_;
  Vec b_;
  std::vector<Vec> verts_;
  double volume_ = 0.0;
};

// ---------------------------------------------------------------------------
// Linear image M K of an inner body.

class LinearImageBody final : public Body {
 public:
  LinearImageBody(Mat M, BodyPtr inner) : m_(std::move(M)), inner_(std::move(inner)) {
    require(inner_ != nullptr, "linear: inner body required");
    require(m_.rows() == m_.cols() && static_cast<int>(m_.rows()) == inner_->dim(),
            "linear: M must be square and match the inner dimension");
    Eigen::FullPivLU<Mat> lu(m_);
    require(lu.isInvertible(), "linear: M must be invertible");
    minv_ = lu.inverse();
    abs_det_ = std::abs(lu.determinant());
  }

  BodyKind kind() const override { return BodyKind::LinearImage; }
  int dim() const override { return inner_->dim(); }

  double gauge(const Vec& x) const override { return inner_->gauge(minv_ * x); }
  Vec gauge_gradient(const Vec& x) const override {
    return minv_.transpose() * inner_->gauge_gradient(minv_ * x);
  }
  double support(const Vec& u) const override { return inner_->support(m_.transpose() * u); }
  Vec support_point(const Vec& u) const override {
    return m_ * inner_->support_point(m_.transpose() * u);
  }

  NormalResult outer_normal(const Vec& y) const override {
    NormalResult in = inner_->outer_normal(minv_ * y);
    Vec n = minv_.transpose() * in.normal;
    return NormalResult{n / n.norm(), in.unique, in.face};
  }

  bool smooth() const override { return inner_->smooth(); }
  bool has_c2_defining() const override { return inner_->has_c2_defining(); }
  double defining_value(const Vec& x) const override { return inner_->defining_value(minv_ * x); }
  Vec defining_gradient(const Vec& x) const override {
    return minv_.transpose() * inner_->defining_gradient(minv_ * x);
  }
  Mat defining_hessian(const Vec& x) const override {
    return minv_.transpose() * inner_->defining_hessian(minv_ * x) * minv_;
  }

  std::optional<double> analytic_volume() const override {
    auto v = inner_->analytic_volume();
    if (!v) return std::nullopt;
    return abs_det_ * *v;
  }

  std::optional<std::vector<Vec2>> as_polygon2d() const override {
    auto inner_poly = inner_->as_polygon2d();
    if (!inner_poly) return std::nullopt;
    std::vector<Vec2> out;
    out.reserve(inner_poly->size());
    Eigen::Matrix2d m2 = m_;
    for (const auto& v : *inner_poly) out.push_back(m2 * v);
    if (m2.determinant() < 0) std::reverse(out.begin(), out.end());
    return out;
  }

  std::optional<std::pair<Mat, Vec>> as_halfspaces() const override {
    auto hs = inner_->as_halfspaces();
    if (!hs) return std::nullopt;
    return std::make_pair(Mat(hs->first * minv_), hs->second);
  }

  const Mat& M() const { return m_; }
  BodyPtr inner() const { return inner_; }
  double abs_det() const { return abs_det_; }

  SpecNode spec_node() const override {
    SpecNode n;
    n.kind = BodyKind::LinearImage;
    n.mat = m_;
    n.inner = std::make_shared<SpecNode>(inner_->spec_node());
    return n;
  }

 private:
  Mat m_, minv_;
  BodyPtr inner_;
  double abs_det_;
};

// ---------------------------------------------------------------------------

BodyPtr make_ellipsoid(const Mat& Q) { return std::make_shared<EllipsoidBody>(Q); }
BodyPtr make_pball(double p, const Vec& scale) { return std::make_shared<PBallBody>(p, scale); }
BodyPtr make_polygon(std::vector<Vec2> verts) {
  return std::make_shared<Polygon2DBody>(std::move(verts));
}
BodyPtr make_halfspace_body(const Mat& A, const Vec& b) {
  return std::make_shared<HalfspaceBody>(A, b);
}
BodyPtr make_linear_image(const Mat& M, BodyPtr inner) {
  return std::make_shared<LinearImageBody>(M, std::move(inner));
}

BodyPtr make_unit_ball(int dim) { return make_ellipsoid(Mat::Identity(dim, dim)); }

BodyPtr make_box2d(double hx, double hy) {
  return make_polygon({Vec2(hx, -hy), Vec2(hx, hy), Vec2(-hx, hy), Vec2(-hx, -hy)});
}

BodyPtr make_cube3d(double half) {
  Mat A(6, 3);
  Vec b(6);
  A << 1, 0, 0, 0, 1, 0, 0, 0, 1, -1, 0, 0, 0, -1, 0, 0, 0, -1;
  b << half, half, half, half, half, half;
  return make_halfspace_body(A, b);
}

// ---------------------------------------------------------------------------
// Direction grids

DirectionGrid DirectionGrid::polar(int count) {
  if (count < 4) count = 4;
  if (count % 2) ++count;
  DirectionGrid g;
  g.dim = 2;
  g.resolution = count;
  g.units.reserve(count);
  for (int k = 0; k < count / 2; ++k) {
    double t = 2.0 * kPi * k / count;
    Vec u(2);
    u << std::cos(t), std::sin(t);
    g.units.push_back(u);
  }
  for (int k = 0; k < count / 2; ++k) g.units.push_back(-g.units[k]);  // exact -u partners
  return g;
}

DirectionGrid DirectionGrid::icosphere(int level) {
  if (level < 0) level = 0;
  if (level > 6) level = 6;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (verts[a] + verts[b]).normalized();
      verts.push_back(m);
      int id = static_cast<int>(verts.size()) - 1;
      midpoint[key] = id;
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (auto [a, b, c] : faces) {
      int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  DirectionGrid g;
  g.dim = 3;
  g.resolution = level;
  g.units.reserve(verts.size());
  for (const auto& v : verts) {
    Vec u(3);
    u << v.x(), v.y(), v.z();
    g.units.push_back(u);
  }
  g.faces = std::move(faces);
  return g;
}

DirectionGrid DirectionGrid::make(int dim, int resolution) {
  if (dim == 2) return polar(resolution);
  if (dim == 3) return icosphere(resolution);
  throw std::invalid_argument("DirectionGrid: dimensions 2 and 3 only");
}

}  // namespace convgeom
