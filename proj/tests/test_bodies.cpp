#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "convgeom/body.hpp"
#include "oracles.hpp"

using namespace convgeom;

namespace {

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

BodyPtr ellipse21() {
  Mat q(2, 2);
  q << 0.25, 0, 0, 1;  // semiaxes (2,1)
  return make_ellipsoid(q);
}

}  // namespace

TEST_CASE("gauge closed forms") {
  auto disk = make_unit_ball(2);
  CHECK(disk->gauge(vec2(3, 4)) == doctest::Approx(5.0));

  auto square = make_box2d();
  CHECK(square->gauge(vec2(0.5, 1)) == doctest::Approx(1.0));

  Mat q(2, 2);
  q << 0.25, 0, 0, 1;
  auto ell = make_ellipsoid(q);
  CHECK(ell->gauge(vec2(2, 0)) == doctest::Approx(1.0));
}

TEST_CASE("support closed forms") {
  auto disk = make_unit_ball(2);
  CHECK(disk->support(vec2(0, 2)) == doctest::Approx(2.0));

  auto square = make_box2d();
  CHECK(square->support(vec2(1, 1)) == doctest::Approx(2.0));

  CHECK(ellipse21()->support(vec2(1, 0)) == doctest::Approx(2.0));
}

TEST_CASE("boundary point and outer normal round trip") {
  auto disk = make_unit_ball(2);
  Vec y = disk->support_point(vec2(0, 1));
  CHECK(y[0] == doctest::Approx(0.0));
  CHECK(y[1] == doctest::Approx(1.0));
  NormalResult n = disk->outer_normal(y);
  CHECK(n.normal[1] == doctest::Approx(1.0));

  Vec ye = ellipse21()->support_point(vec2(1, 0));
  CHECK(ye[0] == doctest::Approx(2.0));
  CHECK(ye[1] == doctest::Approx(0.0));

  auto p4 = make_pball(4.0, vec2(1, 1));
  NormalResult np = p4->outer_normal(vec2(1, 0));
  CHECK(np.normal[0] == doctest::Approx(1.0));
  CHECK(np.normal[1] == doctest::Approx(0.0));
}

TEST_CASE("analytic curvature oracles") {
  auto disk = make_unit_ball(2);
  CHECK(disk->analytic_curvature(vec2(1, 0)).value() == doctest::Approx(1.0));
  CHECK(disk->analytic_curvature(vec2(std::sqrt(0.5), std::sqrt(0.5))).value() ==
        doctest::Approx(1.0));

  // ellipse (2,1): a/b^2 at the major vertex, b/a^2 at the minor
  CHECK(ellipse21()->analytic_curvature(vec2(2, 0)).value() == doctest::Approx(2.0));
  CHECK(ellipse21()->analytic_curvature(vec2(0, 1)).value() == doctest::Approx(0.25));

  // random point vs the parametric closed form
  double t = 0.7;
  Vec y = vec2(2 * std::cos(t), std::sin(t));
  CHECK(ellipse21()->analytic_curvature(y).value() ==
        doctest::Approx(oracle::ellipse_curvature(2, 1, t)).epsilon(1e-10));

  // sphere radius 2: kappa = 1/4
  Mat q3 = Mat::Identity(3, 3) / 4.0;
  auto sphere2 = make_ellipsoid(q3);
  CHECK(sphere2->analytic_curvature(vec3(2, 0, 0)).value() == doctest::Approx(0.25));

  // p=4 ball: flat at the axis point
  auto p4 = make_pball(4.0, vec2(1, 1));
  CHECK(p4->analytic_curvature(vec2(1, 0)).value() == doctest::Approx(0.0));

  // polytopes report unavailable
  CHECK(!make_box2d()->analytic_curvature(vec2(1, 0)).has_value());
}

TEST_CASE("polytope vertex normals flagged non-unique") {
  auto square = make_box2d();
  NormalResult edge = square->outer_normal(vec2(1, 0.3));
  CHECK(edge.unique);
  NormalResult corner = square->outer_normal(vec2(1, 1));
  CHECK(!corner.unique);
  CHECK(corner.face >= 0);
}

TEST_CASE("construction rejects asymmetric and degenerate input") {
  CHECK_THROWS_AS(make_polygon({Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0), Vec2(0, -0.5)}),
                  std::invalid_argument);
  Mat q(2, 2);
  q << 1, 0, 0, -1;
  CHECK_THROWS_AS(make_ellipsoid(q), std::invalid_argument);
  CHECK_THROWS_AS(make_pball(0.5, vec2(1, 1)), std::invalid_argument);
  Mat a(4, 2);
  a << 1, 0, 0, 1, -1, 0, 0, -2;  // rows not exact +/- pairs
  Vec b(4);
  b << 1, 1, 1, 1;
  CHECK_THROWS_AS(make_halfspace_body(a, b), std::invalid_argument);
  Mat sing = Mat::Zero(2, 2);
  CHECK_THROWS_AS(make_linear_image(sing, make_unit_ball(2)), std::invalid_argument);
}

TEST_CASE("gauge-support duality and homogeneity on random pairs") {
  std::vector<BodyPtr> bodies = {make_unit_ball(2), ellipse21(), make_pball(4.0, vec2(1.5, 0.5)),
                                 make_box2d(), make_pball(1.0, vec2(1, 2))};
  Mat m(2, 2);
  m << 1.2, 0.3, -0.4, 0.9;
  bodies.push_back(make_linear_image(m, make_pball(3.0, vec2(1, 1))));

  Rng rng(7);
  for (const auto& body : bodies) {
    for (int it = 0; it < 200; ++it) {
      Vec x = rng.unit_vector(2) * rng.uniform(0.1, 3.0);
      Vec u = rng.unit_vector(2) * rng.uniform(0.1, 3.0);
      double lhs = x.dot(u);
      CHECK(lhs <= body->gauge(x) * body->support(u) + 1e-10);
      double lam = rng.uniform(0.1, 5.0);
      CHECK(body->gauge(lam * x) == doctest::Approx(lam * body->gauge(x)).epsilon(1e-12));
      CHECK(body->support(lam * u) == doctest::Approx(lam * body->support(u)).epsilon(1e-12));
      CHECK(body->gauge(-x) == body->gauge(x));
    }
  }
}

TEST_CASE("Gauss map consistency and support attainment on smooth kinds") {
  std::vector<BodyPtr> bodies = {make_unit_ball(2), ellipse21(), make_pball(4.0, vec2(1.5, 0.5))};
  Mat m(2, 2);
  m << 1.2, 0.3, -0.4, 0.9;
  bodies.push_back(make_linear_image(m, make_pball(3.0, vec2(1, 1))));

  Rng rng(11);
  for (const auto& body : bodies) {
    for (int it = 0; it < 100; ++it) {
      Vec u = rng.unit_vector(2);
      Vec y = body->support_point(u);
      CHECK(body->gauge(y) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(y.dot(u) == doctest::Approx(body->support(u)).epsilon(1e-10));
      Vec n = body->outer_normal(y).normal;
      CHECK((n - u).norm() < 1e-8);
    }
  }
}

TEST_CASE("linear image volume and curvature composition") {
  Mat m(2, 2);
  m << 2, 0, 0, 1;  // disk -> ellipse (2,1)
  auto ell = make_linear_image(m, make_unit_ball(2));
  CHECK(ell->analytic_volume().value() == doctest::Approx(2 * kPi));
  CHECK(ell->analytic_curvature(vec2(2, 0)).value() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(ell->gauge(vec2(2, 0)) == doctest::Approx(1.0));
  CHECK(ell->support(vec2(1, 0)) == doctest::Approx(2.0));

  // matches the direct ellipsoid representation everywhere
  auto direct = ellipse21();
  Rng rng(3);
  for (int it = 0; it < 50; ++it) {
    Vec x = rng.unit_vector(2) * rng.uniform(0.2, 2.0);
    CHECK(ell->gauge(x) == doctest::Approx(direct->gauge(x)).epsilon(1e-12));
    CHECK(ell->support(x) == doctest::Approx(direct->support(x)).epsilon(1e-12));
  }
}

TEST_CASE("pball volume closed form") {
  auto p1 = make_pball(1.0, vec2(1, 1));
  CHECK(p1->analytic_volume().value() == doctest::Approx(2.0));  // cross polytope
  auto p2 = make_pball(2.0, vec2(1, 1));
  CHECK(p2->analytic_volume().value() == doctest::Approx(kPi));
}

TEST_CASE("direction grids are unit and symmetric") {
  DirectionGrid polar = DirectionGrid::polar(64);
  CHECK(polar.units.size() == 64);
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(polar.units[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((polar.units[i] + polar.units[i + 32]).norm() == 0.0);  // exact -u partner
  }

  DirectionGrid ico = DirectionGrid::icosphere(2);
  CHECK(ico.units.size() == 162);  // 10*4^2 + 2
  for (const auto& u : ico.units) {
    CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-12));
    bool has_neg = false;
    for (const auto& v : ico.units)
      if ((u + v).norm() < 1e-12) has_neg = true;
    CHECK(has_neg);
  }
  DirectionGrid ico4 = DirectionGrid::icosphere(4);
  CHECK(ico4.units.size() == 2562);
}
