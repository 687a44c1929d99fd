#ifndef CONVGEOM_BODY_HPP
#define CONVGEOM_BODY_HPP

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "convgeom/geom.hpp"

namespace convgeom {

enum class BodyKind { Ellipsoid, PBall, Polygon2D, Halfspaces, LinearImage };

std::string body_kind_name(BodyKind k);

struct NormalResult {
  Vec normal;          // unit outer normal
  bool unique = true;  // false at polytope vertices/ridges
  int face = -1;       // active face index for polytope kinds (lowest on tie)
};

/// A centrally symmetric convex body with the origin in its interior.
/// Instances are immutable after construction; every operation is pure.
class Body {
 public:
  virtual ~Body() = default;

  virtual BodyKind kind() const = 0;
  virtual int dim() const = 0;

  /// Minkowski functional ||x||_K. Positively homogeneous, even, 0 only at 0.
  virtual double gauge(const Vec& x) const = 0;

  /// Gradient of the gauge at x != 0 (for polytopes: the active-face linear
  /// functional, lowest face index on ties). Homogeneous of degree 0.
  virtual Vec gauge_gradient(const Vec& x) const = 0;

  /// Support function h_K(u) = sup_{y in K} <y,u>.
  virtual double support(const Vec& u) const = 0;

  /// A boundary point where u is an outer normal (the argmax of <y,u> over K;
  /// unique for smooth strictly convex kinds, lowest-index vertex on polytope
  /// ties).
  virtual Vec support_point(const Vec& u) const = 0;

  /// Outer unit normal at a boundary point y (gauge(y) = 1 within tol).
  /// Non-unique at polytope vertices; the flag reports it and the lowest face
  /// index wins.
  virtual NormalResult outer_normal(const Vec& y) const;

  /// Strictly convex with C1 boundary (ellipsoid, p-ball with p > 1, linear
  /// images of those).
  virtual bool smooth() const = 0;

  // C2 defining function g with K = {g <= 0}, used by the curvature oracle
  // and the 3D curve marcher. Present for ellipsoids, p-balls with p >= 2 and
  // linear images of those.
  virtual bool has_c2_defining() const { return false; }
  virtual double defining_value(const Vec& x) const;
  virtual Vec defining_gradient(const Vec& x) const;
  virtual Mat defining_hessian(const Vec& x) const;

  /// Gauss-Kronecker curvature at boundary point y by closed-form
  /// differential geometry; nullopt when unavailable (polytope kinds,
  /// p-balls with p < 2).
  virtual std::optional<double> analytic_curvature(const Vec& y) const;

  /// |K| in closed form when one exists.
  virtual std::optional<double> analytic_volume() const { return std::nullopt; }

  // Exact polygon/halfspace views used by the exact volume paths.
  virtual std::optional<std::vector<Vec2>> as_polygon2d() const { return std::nullopt; }
  virtual std::optional<std::pair<Mat, Vec>> as_halfspaces() const { return std::nullopt; }

  /// Structural description of the construction parameters; the wire-format
  /// serializer walks this.
  struct SpecNode {
    BodyKind kind = BodyKind::Ellipsoid;
    Mat mat;                  // ellipsoid q / linear m / halfspace a
    Vec vec;                  // pball scale / halfspace b
    double scalar = 0.0;      // pball p
    std::vector<Vec2> verts;  // polygon
    std::shared_ptr<SpecNode> inner;  // linear image
  };
  virtual SpecNode spec_node() const = 0;
};

using BodyPtr = std::shared_ptr<const Body>;

// Factories. All validate central symmetry and origin-interior at
// construction and throw std::invalid_argument on violation.
BodyPtr make_ellipsoid(const Mat& gauge_matrix);       // ||x||^2 = <x, Q x>, Q pd
BodyPtr make_pball(double p, const Vec& scale);        // sum |x_i/s_i|^p <= 1
BodyPtr make_polygon(std::vector<Vec2> vertices_ccw);  // exact +/- vertex pairs
BodyPtr make_halfspace_body(const Mat& A, const Vec& b);  // <a_i,x> <= b_i, exact +/- row pairs
BodyPtr make_linear_image(const Mat& M, BodyPtr inner);   // M K_inner, M invertible

// Convenience shapes used throughout the tests and CLI docs.
BodyPtr make_unit_ball(int dim);  // ellipsoid with Q = I
BodyPtr make_box2d(double half_x = 1.0, double half_y = 1.0);  // polygon kind
BodyPtr make_cube3d(double half = 1.0);                        // halfspace kind

/// Unit-vector grid over S^{n-1}: 2D equally spaced angles (count rounded up
/// to even so u and -u pair exactly); 3D subdivided-icosahedron vertices.
struct DirectionGrid {
  int dim = 0;
  int resolution = 0;  // 2D: direction count; 3D: subdivision level
  std::vector<Vec> units;
  std::vector<std::array<int, 3>> faces;  // 3D only; icosphere triangles

  static DirectionGrid polar(int count);
  static DirectionGrid icosphere(int level);
  static DirectionGrid make(int dim, int resolution);  // dispatch on dim
};

}  // namespace convgeom

#endif
