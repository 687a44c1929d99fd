#ifndef CONVGEOM_GEOM_HPP
#define CONVGEOM_GEOM_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

namespace convgeom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

constexpr double kPi = 3.14159265358979323846;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

inline Vec2 dir2(double theta) { return Vec2(std::cos(theta), std::sin(theta)); }

inline Vec cross3d(const Vec& a, const Vec& b) {
  Vec c(3);
  c << a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0];
  return c;
}

// any unit vector orthogonal to a nonzero 3-vector
inline Vec unit_orthogonal3(const Vec& a) {
  Vec e = Vec::Zero(3);
  int smallest = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(a[i]) < std::abs(a[smallest])) smallest = i;
  e[smallest] = 1.0;
  Vec t = cross3d(a, e);
  return t / t.norm();
}

// wrap to [0, 2*pi)
inline double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * kPi);
  return t < 0 ? t + 2.0 * kPi : t;
}

/// Volume of the k-dimensional Euclidean unit ball.
inline double unit_ball_volume(int k) {
  return std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

// Deterministic order-stable reduction: pairwise summation over a fixed index
// order, so serial and parallel producers agree to the last bit once the
// per-item values agree.
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

// SplitMix64, used to derive independent substreams from (seed, stream).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  splitmix64(s);
  return splitmix64(s);
}

// Deterministic uniform doubles; avoids std::uniform_real_distribution whose
// output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    for (int i = 0; i < 4; ++i) splitmix64(state_);
  }
  std::uint64_t next_u64() { return splitmix64(state_); }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // standard normal via Box-Muller
  double normal() {
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }
  Vec unit_vector(int dim) {
    Vec v(dim);
    double n2 = 0.0;
    do {
      for (int i = 0; i < dim; ++i) v[i] = normal();
      n2 = v.norm();
    } while (n2 < 1e-12);
    return v / n2;
  }

 private:
  std::uint64_t state_;
};

// Nodes/weights for composite Gauss-Legendre quadrature on [-1,1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  static const GaussLegendre& order(int n);  // cached, n in [2, 64]
};

}  // namespace convgeom

#endif
