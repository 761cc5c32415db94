#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace towpde {

// Thrown when inputs violate a documented precondition (bad config, bad
// arguments). The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a computation fails numerically (iteration cap, query outside
// the interpolation hull). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spatial vector for dimensions 1..3. Fixed storage keeps the hot loops
// allocation-free.
struct VecN {
  int n = 0;
  std::array<double, 3> v{0.0, 0.0, 0.0};

  VecN() = default;
  explicit VecN(double x) : n(1), v{x, 0.0, 0.0} {}
  VecN(double x, double y) : n(2), v{x, y, 0.0} {}
  VecN(double x, double y, double z) : n(3), v{x, y, z} {}

  static VecN zero(int dim) {
    VecN r;
    r.n = dim;
    return r;
  }
  static VecN axis(int dim, int i, double scale = 1.0) {
    VecN r = zero(dim);
    r.v[static_cast<size_t>(i)] = scale;
    return r;
  }

  double& operator[](int i) { return v[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<size_t>(i)]; }

  VecN operator+(const VecN& o) const {
    VecN r = *this;
    for (int i = 0; i < n; ++i) r.v[static_cast<size_t>(i)] += o[i];
    return r;
  }
  VecN operator-(const VecN& o) const {
    VecN r = *this;
    for (int i = 0; i < n; ++i) r.v[static_cast<size_t>(i)] -= o[i];
    return r;
  }
  VecN operator*(double s) const {
    VecN r = *this;
    for (int i = 0; i < n; ++i) r.v[static_cast<size_t>(i)] *= s;
    return r;
  }
  double dot(const VecN& o) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += v[static_cast<size_t>(i)] * o[i];
    return s;
  }
  double norm() const { return std::sqrt(dot(*this)); }
  bool finite() const {
    for (int i = 0; i < n; ++i)
      if (!std::isfinite(v[static_cast<size_t>(i)])) return false;
    return true;
  }
};

inline VecN operator*(double s, const VecN& x) { return x * s; }

struct SpaceTimePoint {
  VecN x;
  double t = 0.0;
};

// Parabolic distance |x-y| + |t-s|^{1/2}.
inline double parabolic_distance(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  return (a.x - b.x).norm() + std::sqrt(std::abs(a.t - b.t));
}

// Shared step-size / exponent bundle. alpha and p are redundant and kept
// consistent through the mapping alpha = (p-1)/(p+n), beta = (n+1)/(p+n).
struct GameParams {
  int n = 1;
  double eps = 0.1;
  double alpha = 0.0;
  double beta = 0.0;
  double p = 2.0;
  double T = 1.0;

  double time_step() const { return 0.5 * eps * eps; }

  static GameParams from_p(int n, double eps, double p, double T);
  static GameParams from_alpha(int n, double eps, double alpha, double T);
};

}  // namespace towpde
