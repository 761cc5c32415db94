#include "towpde/quadrature.hpp"

#include <cmath>

namespace towpde {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

// 5-point Gauss-Legendre on [-1,1], weights normalized to average.
const double kGL5Nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                             0.5384693101056831, 0.9061798459386640};
const double kGL5Weights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};

// 3-point Gauss-Legendre on [0,1] (radial factor of the polar product rule).
const double kGL3Nodes[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
const double kGL3Weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
}  // namespace

DirectionSet DirectionSet::make(int n, int count, Refinement refinement, double theta_tol) {
  if (n < 1 || n > 3) throw ValidationError("DirectionSet: n must be 1..3");
  if (!(theta_tol > 0.0)) throw ValidationError("DirectionSet: theta_tol must be positive");
  DirectionSet d;
  d.n = n;
  d.refinement = refinement;
  d.theta_tol = theta_tol;
  switch (n) {
    case 1:
      d.vectors = {VecN(1.0), VecN(-1.0)};
      break;
    case 2: {
      if (count < 4) throw ValidationError("DirectionSet: need at least 4 directions in 2-d");
      d.vectors.reserve(static_cast<size_t>(count));
      for (int k = 0; k < count; ++k) {
        double phi = 2.0 * kPi * k / count;
        d.vectors.emplace_back(std::cos(phi), std::sin(phi));
      }
      break;
    }
    case 3: {
      if (count < 12) throw ValidationError("DirectionSet: need at least 12 directions in 3-d");
      // Golden-angle spiral, offset half a band from the poles.
      d.vectors.reserve(static_cast<size_t>(count));
      const double golden = kPi * (std::sqrt(5.0) + 1.0);
      for (int k = 0; k < count; ++k) {
        double z = 1.0 - (2.0 * k + 1.0) / count;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden * k;
        d.vectors.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
      }
      break;
    }
  }
  return d;
}

DirectionSet DirectionSet::defaults(int n) {
  switch (n) {
    case 1: return make(1, 2, Refinement::LocalBracket, 1e-4);
    case 2: return make(2, 64, Refinement::LocalBracket, 1e-4);
    default: return make(3, 194, Refinement::LocalBracket, 1e-4);
  }
}

double DirectionSet::bracket_halfwidth() const {
  switch (n) {
    case 1: return 0.0;
    case 2: return 2.0 * kPi / static_cast<double>(vectors.size());
    default:
      // Roughly the covering radius of the spiral, padded.
      return 1.4 * std::sqrt(4.0 * kPi / static_cast<double>(vectors.size()));
  }
}

BallRule BallRule::make(int n) {
  BallRule rule;
  rule.n = n;
  switch (n) {
    case 1:
      rule.nodes = {VecN(0.0)};
      rule.weights = {1.0};
      break;
    case 2:
      for (int i = 0; i < 5; ++i) {
        rule.nodes.emplace_back(kGL5Nodes[i], 0.0);
        rule.weights.push_back(0.5 * kGL5Weights[i]);
      }
      break;
    case 3: {
      // Polar product: 3 radial Gauss nodes (weighted by r) times 8 angles.
      const int m = 8;
      for (int i = 0; i < 3; ++i) {
        double r = kGL3Nodes[i];
        double w = 2.0 * kGL3Weights[i] * r / m;
        for (int j = 0; j < m; ++j) {
          double phi = 2.0 * kPi * j / m;
          rule.nodes.emplace_back(r * std::cos(phi), r * std::sin(phi), 0.0);
          rule.weights.push_back(w);
        }
      }
      break;
    }
    default:
      throw ValidationError("BallRule: n must be 1..3");
  }
  return rule;
}

}  // namespace towpde
