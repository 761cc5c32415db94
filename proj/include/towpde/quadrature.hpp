#pragma once

#include <cmath>
#include <vector>

#include "towpde/types.hpp"

namespace towpde {

enum class Refinement { None, LocalBracket };

// Finite scan set for the sup/inf over unit directions.
//   n=1: exactly {+1, -1}.
//   n=2: `count` equispaced angles starting at (1,0).
//   n=3: Fibonacci (golden-angle) spiral covering of the sphere.
// With LocalBracket the coarse winner is polished to theta_tol radians
// (golden section on the angle in 2-d, alternating golden section on two
// tangent parameters in 3-d).
struct DirectionSet {
  int n = 1;
  std::vector<VecN> vectors;
  Refinement refinement = Refinement::LocalBracket;
  double theta_tol = 1e-4;

  static DirectionSet make(int n, int count, Refinement refinement, double theta_tol);
  static DirectionSet defaults(int n);  // 2 / 64 / 194 directions

  // Half-width of the local bracket around a coarse winner.
  double bracket_halfwidth() const;
};

// Quadrature for the average over the (n-1)-disk of radius eps orthogonal to
// a direction. Nodes live on the unit disk orthogonal to the last coordinate
// axis and are rotated/scaled at evaluation time. Exact for polynomials of
// total degree <= 4 on the disk; the n=1 "disk" is the single point {0}.
struct BallRule {
  int n = 1;
  std::vector<VecN> nodes;
  std::vector<double> weights;

  static BallRule make(int n);
};

// Rotation taking the reference axis e_n to nu, applied to a reference-frame
// offset h (smooth in nu except at the antipode -e_n).
inline VecN rotate_from_axis(const VecN& nu, const VecN& h) {
  switch (nu.n) {
    case 1:
      return h;
    case 2:
      // Columns (nu_y, -nu_x) and (nu_x, nu_y).
      return VecN(nu[1] * h[0] + nu[0] * h[1], -nu[0] * h[0] + nu[1] * h[1]);
    default: {
      const double c = nu[2];
      if (c < -1.0 + 1e-12) return VecN(h[0], -h[1], -h[2]);
      const VecN w(-nu[1], nu[0], 0.0);  // e_3 x nu
      const VecN wxh(w[1] * h[2] - w[2] * h[1], w[2] * h[0] - w[0] * h[2],
                     w[0] * h[1] - w[1] * h[0]);
      const double s = w.dot(h) / (1.0 + c);
      return VecN(c * h[0] + wxh[0] + s * w[0], c * h[1] + wxh[1] + s * w[1],
                  c * h[2] + wxh[2] + s * w[2]);
    }
  }
}

// Average of `slice` over the quadrature nodes of the eps-disk orthogonal to
// nu, centered at x. Out-of-hull nodes surface as NumericalError from the
// slice itself.
template <class Slice>
double ball_average(const Slice& slice, const VecN& x, const VecN& nu, double eps,
                    const BallRule& rule) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    VecN offset = rotate_from_axis(nu, rule.nodes[i]);
    acc += rule.weights[i] * slice(x + offset * eps);
  }
  return acc;
}

// One-step operator alpha * slice(x + eps*nu) + beta * (disk average).
template <class Slice>
double a_epsilon(const Slice& slice, const VecN& x, const VecN& nu,
                 const GameParams& params, const BallRule& rule) {
  double step = slice(x + nu * params.eps);
  return params.alpha * step + params.beta * ball_average(slice, x, nu, params.eps, rule);
}

struct MidrangeResult {
  double value = 0.0;  // (max + min) / 2
  double max_value = 0.0;
  double min_value = 0.0;
  VecN nu_max, nu_min;
};

namespace detail {

// Golden-section maximization of f over [lo, hi] down to width tol.
// Returns the best of the interior polish and the supplied fallback value,
// so refinement can never report a worse optimum than the coarse scan.
template <class Fn>
void golden_max(const Fn& f, double lo, double hi, double tol, double& best_arg,
                double& best_val) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  auto consider = [&](double arg, double val) {
    if (val > best_val) {
      best_val = val;
      best_arg = arg;
    }
  };
  consider(c, fc);
  consider(d, fd);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
}

inline VecN tangent1(const VecN& nu) { return rotate_from_axis(nu, VecN::axis(nu.n, 0)); }
inline VecN tangent2(const VecN& nu) { return rotate_from_axis(nu, VecN::axis(nu.n, 1)); }

inline VecN tilt(const VecN& nu, const VecN& t1, const VecN& t2, double a, double b) {
  VecN d = nu + t1 * a + t2 * b;
  double len = d.norm();
  return d * (1.0 / len);
}

}  // namespace detail

// Scan for the direction maximizing (or minimizing) the one-step operator,
// ties resolved toward the lowest index, followed by the optional local
// bracket polish.
template <class Slice>
void best_direction(const Slice& slice, const VecN& x, const GameParams& params,
                    const DirectionSet& dirs, const BallRule& rule, bool maximize,
                    VecN& arg, double& val) {
  const double sign = maximize ? 1.0 : -1.0;
  auto eval = [&](const VecN& nu) { return sign * a_epsilon(slice, x, nu, params, rule); };

  std::size_t best = 0;
  double best_val = eval(dirs.vectors[0]);
  for (std::size_t i = 1; i < dirs.vectors.size(); ++i) {
    double v = eval(dirs.vectors[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  arg = dirs.vectors[best];
  val = sign * best_val;
  if (dirs.refinement == Refinement::None || dirs.n == 1) return;

  const double halfwidth = dirs.bracket_halfwidth();
  if (dirs.n == 2) {
    double phi0 = std::atan2(arg[1], arg[0]);
    double ref_arg = phi0, ref_val = best_val;
    detail::golden_max([&](double phi) { return eval(VecN(std::cos(phi), std::sin(phi))); },
                       phi0 - halfwidth, phi0 + halfwidth, dirs.theta_tol, ref_arg, ref_val);
    if (ref_val > best_val) {
      arg = VecN(std::cos(ref_arg), std::sin(ref_arg));
      val = sign * ref_val;
    }
    return;
  }

  // n = 3: alternating golden section on two tangent tilts.
  VecN nu = arg;
  const VecN t1 = detail::tangent1(nu), t2 = detail::tangent2(nu);
  double a = 0.0, b = 0.0, cur = best_val;
  double w = std::tan(halfwidth);
  for (int sweep = 0; sweep < 4 && w > 0.25 * dirs.theta_tol; ++sweep) {
    double arg1 = a, val1 = cur;
    detail::golden_max([&](double s) { return eval(detail::tilt(nu, t1, t2, s, b)); },
                       a - w, a + w, dirs.theta_tol, arg1, val1);
    if (val1 > cur) {
      cur = val1;
      a = arg1;
    }
    double arg2 = b, val2 = cur;
    detail::golden_max([&](double s) { return eval(detail::tilt(nu, t1, t2, a, s)); },
                       b - w, b + w, dirs.theta_tol, arg2, val2);
    if (val2 > cur) {
      cur = val2;
      b = arg2;
    }
    w *= 0.35;
  }
  if (cur > best_val) {
    arg = detail::tilt(nu, t1, t2, a, b);
    val = sign * cur;
  }
}

// Midrange (sup + inf)/2 of the one-step operator over the direction set.
template <class Slice>
MidrangeResult midrange_over_directions(const Slice& slice, const VecN& x,
                                        const GameParams& params, const DirectionSet& dirs,
                                        const BallRule& rule) {
  MidrangeResult r;
  best_direction(slice, x, params, dirs, rule, true, r.nu_max, r.max_value);
  best_direction(slice, x, params, dirs, rule, false, r.nu_min, r.min_value);
  r.value = 0.5 * (r.max_value + r.min_value);
  return r;
}

}  // namespace towpde
