#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "convgeom/volume.hpp"
#include "oracles.hpp"

using namespace convgeom;

namespace {

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

BodyPtr ellipse21() {
  Mat q(2, 2);
  q << 0.25, 0, 0, 1;
  return make_ellipsoid(q);
}

VolumeEstimate F(const BodyPtr& b, double tau, const Vec& x,
                 VolumeMethod m = VolumeMethod::Auto) {
  VolumeOptions opts;
  opts.tol = 1e-9;
  return intersection_volume({b, tau, x}, m, opts);
}

}  // namespace

TEST_CASE("disk lens areas against the closed form") {
  auto disk = make_unit_ball(2);
  CHECK(F(disk, 1.0, vec2(0, 0)).value == doctest::Approx(kPi).epsilon(1e-9));
  for (double d : {0.2, 0.5, 1.0, 1.5, 1.9}) {
    VolumeEstimate est = F(disk, 1.0, vec2(d, 0));
    double want = oracle::lens_area_unit_disks(d);
    CHECK(std::abs(est.value - want) < 1e-8);
    CHECK(std::abs(est.value - want) <= est.abs_error + 1e-10);
  }
  // rotated offsets too
  VolumeEstimate rot = F(disk, 1.0, vec2(std::cos(0.83), std::sin(0.83)));
  CHECK(rot.value == doctest::Approx(oracle::lens_area_unit_disks(1.0)).epsilon(1e-9));
  // empty at the support shell
  CHECK(F(disk, 1.0, vec2(2.5, 0)).value == 0.0);
  CHECK(F(disk, 1.0, vec2(2.5, 0)).abs_error == 0.0);
}

TEST_CASE("disk lens for tau != 1 against the two-circle formula") {
  auto disk = make_unit_ball(2);
  for (double tau : {0.5, 2.0}) {
    for (double d : {0.7, 1.2, 0.55}) {
      if (d <= std::abs(1 - tau) || d >= 1 + tau) continue;
      VolumeEstimate est = F(disk, tau, vec2(d, 0));
      CHECK(est.value == doctest::Approx(oracle::lens_area_circles(1, tau, d)).epsilon(1e-9));
    }
  }
  // containment: tau=0.5, small offset
  VolumeEstimate inner = F(disk, 0.5, vec2(0.2, 0.1));
  CHECK(inner.value == doctest::Approx(0.25 * kPi).epsilon(1e-9));
}

TEST_CASE("square product formula") {
  auto square = make_box2d();
  CHECK(F(square, 1.0, vec2(0.5, 0.5)).value == doctest::Approx(2.25));
  CHECK(F(square, 1.0, vec2(1, 0)).value == doctest::Approx(2.0));
  CHECK(F(square, 1.0, vec2(1, 1)).value == doctest::Approx(1.0));
  Rng rng(5);
  for (int it = 0; it < 50; ++it) {
    Vec x = vec2(rng.uniform(-2.2, 2.2), rng.uniform(-2.2, 2.2));
    CHECK(F(square, 1.0, x).value ==
          doctest::Approx(oracle::square_translate_area(Vec2(x[0], x[1]))).epsilon(1e-12));
  }
}

TEST_CASE("body volumes") {
  VolumeOptions opts;
  opts.tol = 1e-8;
  CHECK(body_volume(make_box2d(), VolumeMethod::Auto, opts).value == doctest::Approx(4.0));
  CHECK(body_volume(make_unit_ball(2), VolumeMethod::Auto, opts).value ==
        doctest::Approx(kPi).epsilon(1e-8));
  CHECK(body_volume(ellipse21(), VolumeMethod::Auto, opts).value ==
        doctest::Approx(2 * kPi).epsilon(1e-8));
}

TEST_CASE("support identity both directions") {
  auto p4 = make_pball(4.0, vec2(1, 1));
  Rng rng(9);
  for (int it = 0; it < 40; ++it) {
    Vec u = rng.unit_vector(2);
    double tau = rng.uniform(0.5, 2.0);
    // just inside the shell: F > 0
    Vec x_in = (1.0 + tau - 1e-6) / p4->gauge(u) * u;
    VolumeEstimate in = F(p4, tau, x_in);
    CHECK(in.value > 0.0);
    // on/outside the shell: F = 0 exactly
    Vec x_out = (1.0 + tau) / p4->gauge(u) * u;
    CHECK(F(p4, tau, x_out).value == 0.0);
  }
}

TEST_CASE("F symmetry, ray monotonicity, Brunn-Minkowski concavity") {
  std::vector<BodyPtr> bodies = {make_unit_ball(2), ellipse21(), make_pball(4.0, vec2(1.3, 0.8))};
  Rng rng(13);
  for (const auto& body : bodies) {
    for (int it = 0; it < 12; ++it) {
      double tau = rng.uniform(0.6, 1.7);
      Vec u = rng.unit_vector(2);
      double reach = (1.0 + tau) / body->gauge(u);

      // symmetry
      Vec x = rng.uniform(0.1, 0.95) * reach * u;
      VolumeEstimate fp = F(body, tau, x);
      VolumeEstimate fm = F(body, tau, Vec(-x));
      CHECK(std::abs(fp.value - fm.value) <= fp.abs_error + fm.abs_error + 1e-10);

      // monotone along the ray
      double t1 = rng.uniform(0.05, 0.9), t2 = rng.uniform(t1, 0.999);
      double f1 = F(body, tau, Vec(t1 * reach * u)).value;
      double f2 = F(body, tau, Vec(t2 * reach * u)).value;
      CHECK(f1 >= f2 - 1e-9);

      // F^{1/2} concave along a segment inside the support set
      Vec a = rng.uniform(0.0, 0.8) * reach * rng.unit_vector(2);
      Vec b = rng.uniform(0.0, 0.8) * reach * rng.unit_vector(2);
      if (body->gauge(a) >= 1 + tau || body->gauge(b) >= 1 + tau) continue;
      double lam = rng.uniform(0.2, 0.8);
      Vec mid = lam * a + (1 - lam) * b;
      double fa = F(body, tau, a).value, fb = F(body, tau, b).value,
             fmid = F(body, tau, mid).value;
      CHECK(std::sqrt(fmid) >= lam * std::sqrt(fa) + (1 - lam) * std::sqrt(fb) - 1e-6);
    }
  }
}

TEST_CASE("affine covariance of F") {
  // F_{MK}(Mx) = |det M| F_K(x), exact for the exact paths
  Mat m(2, 2);
  m << 1.4, 0.6, -0.2, 0.9;
  auto inner = make_pball(3.0, vec2(1, 1));
  auto mapped = make_linear_image(m, inner);
  double det = std::abs(m.determinant());
  Rng rng(17);
  for (int it = 0; it < 20; ++it) {
    double tau = rng.uniform(0.6, 1.6);
    Vec x = rng.unit_vector(2) * rng.uniform(0.1, 1.0 + tau - 0.1);
    if (inner->gauge(x) >= 1 + tau) continue;
    double f_inner = F(inner, tau, x).value;
    double f_mapped = F(mapped, tau, Vec(m * x)).value;
    CHECK(f_mapped == doctest::Approx(det * f_inner).epsilon(1e-7));
  }
}

TEST_CASE("Monte Carlo agrees with the exact path inside its CI") {
  auto disk = make_unit_ball(2);
  VolumeOptions opts;
  opts.tol = 3e-3;
  opts.seed = 42;
  int covered = 0;
  for (int s = 0; s < 20; ++s) {
    opts.seed = s;
    VolumeEstimate mc = intersection_volume({disk, 1.0, vec2(1, 0)}, VolumeMethod::MonteCarlo, opts);
    CHECK(mc.method == VolumeMethodUsed::MonteCarlo);
    double want = oracle::lens_area_unit_disks(1.0);
    if (std::abs(mc.value - want) <= mc.abs_error) ++covered;
  }
  CHECK(covered >= 17);  // 95% CI, 20 trials
}

TEST_CASE("exact 3D polytope volumes") {
  auto cube = make_cube3d();
  VolumeOptions opts;
  Vec x(3);
  x << 0.5, 0.25, -0.75;
  VolumeEstimate est = intersection_volume({cube, 1.0, x}, VolumeMethod::Exact, opts);
  CHECK(est.method == VolumeMethodUsed::ExactPoly3D);
  CHECK(est.value == doctest::Approx(oracle::cube_translate_volume(x)).epsilon(1e-10));

  CHECK(body_volume(cube, VolumeMethod::Exact, opts).value == doctest::Approx(8.0));

  // tau != 1
  Vec x2(3);
  x2 << 0.3, 0.0, 0.1;
  VolumeEstimate half = intersection_volume({cube, 0.5, x2}, VolumeMethod::Exact, opts);
  // half cube [-0.5,0.5]^3 + x2 inside the unit cube entirely
  CHECK(half.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("3D Monte Carlo on the ball lens") {
  auto ball = make_unit_ball(3);
  VolumeOptions opts;
  opts.tol = 5e-3;
  opts.seed = 7;
  Vec x(3);
  x << 1.0, 0, 0;
  VolumeEstimate est = intersection_volume({ball, 1.0, x}, VolumeMethod::Auto, opts);
  CHECK(est.method == VolumeMethodUsed::MonteCarlo);
  CHECK(std::abs(est.value - oracle::lens_volume_unit_balls(1.0)) < 3 * est.abs_error + 1e-3);
}

TEST_CASE("width of intersection") {
  auto disk = make_unit_ball(2);
  CHECK(width_of_intersection({disk, 1.0, vec2(0, 0)}, vec2(1, 0)) == doctest::Approx(2.0));
  CHECK(width_of_intersection({disk, 1.0, vec2(1, 0)}, vec2(1, 0)) ==
        doctest::Approx(1.0).epsilon(1e-9));
  auto square = make_box2d();
  CHECK(width_of_intersection({square, 1.0, vec2(1, 1)}, vec2(1, 0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(width_of_intersection({disk, 1.0, vec2(3, 0)}, vec2(1, 0)), std::domain_error);

  // lens width along the normal direction: (1+tau-lambda) * <x, N>
  for (double tau : {0.5, 1.0, 2.0}) {
    double lambda = 0.8 + tau * 0.4;
    double want = (1.0 + tau - lambda) * 1.0;
    CHECK(width_of_intersection({disk, tau, vec2(lambda, 0)}, vec2(1, 0)) ==
          doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("tiny lens near the support shell stays certified") {
  auto disk = make_unit_ball(2);
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    double d = 2.0 - eps;
    VolumeEstimate est = F(disk, 1.0, vec2(d, 0));
    double want = oracle::lens_area_unit_disks(d);
    CHECK(est.value == doctest::Approx(want).epsilon(1e-5));
    CHECK(std::abs(est.value - want) <= 10 * est.abs_error + 1e-16);
  }
}

TEST_CASE("budget exceeded is reported, not hidden") {
  auto disk = make_unit_ball(2);
  VolumeOptions opts;
  opts.tol = 1e-18;  // unreachable
  opts.poly_m = 64;
  opts.poly_m_max = 128;
  VolumeEstimate est = intersection_volume({disk, 1.0, vec2(1, 0)}, VolumeMethod::Exact, opts);
  CHECK(est.flag == "budget exceeded");
  CHECK(est.value == doctest::Approx(oracle::lens_area_unit_disks(1.0)).epsilon(1e-3));
}
