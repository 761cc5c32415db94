#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "towpde/dpp.hpp"
#include "towpde/geometry.hpp"
#include "towpde/grid.hpp"

namespace towpde {

using Mat3 = std::array<std::array<double, 3>, 3>;

inline double quadratic_form(const Mat3& H, const VecN& v) {
  double s = 0.0;
  for (int i = 0; i < v.n; ++i)
    for (int j = 0; j < v.n; ++j) s += H[static_cast<size_t>(i)][static_cast<size_t>(j)] * v[i] * v[j];
  return s;
}

inline double trace(const Mat3& H, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += H[static_cast<size_t>(i)][static_cast<size_t>(i)];
  return s;
}

// Space-time test function with exact derivatives, so consistency checks do
// not compound finite-difference error.
struct SmoothFunction {
  std::function<double(const VecN&, double)> value;
  std::function<double(const VecN&, double)> time_deriv;
  std::function<VecN(const VecN&, double)> gradient;
  std::function<Mat3(const VecN&, double)> hessian;

  BoundaryData boundary_data(std::optional<double> lipschitz = std::nullopt) const {
    return BoundaryData{[f = value](const SpaceTimePoint& z) { return f(z.x, z.t); },
                        lipschitz};
  }
};

enum class ReferenceKind { HeatEigen, RadialW, CustomSmooth };

struct ReferenceSolution {
  ReferenceKind kind = ReferenceKind::CustomSmooth;
  SmoothFunction fn;
};

// Separable heat-flow eigenfunction on the unit interval: exact solution of
// 3 u_t = u_xx with zero lateral values, u(x,0) = sin(pi x).
ReferenceSolution heat_reference();

// Radial comparison function for the annulus exit-time game: solves
//   (1-alpha)/(2r) * (n-1)/(n+1) * w' + (alpha/2) * w'' = -1
// on (delta_ext, R+eps) with w(delta_ext) = 0 and w'(R+eps) = 0. The generic
// power branch switches to a logarithmic one at alpha = (n-1)/(2n).
struct RadialW {
  int n = 2;
  double alpha = 0.5;
  double delta_ext = 0.0, R = 0.0, eps = 0.0;
  bool log_branch = false;
  double quad_coef = 0.0, c1 = 0.0, c2 = 0.0, gamma = 0.0;

  static RadialW make(int n, double alpha, double delta_ext, double R, double eps);
  double value(double r) const;
  double deriv(double r) const;
  double second(double r) const;
  double ode_residual(double r) const;

 private:
  void check_range(double r) const;
};

double radial_w(double r, int n, double alpha, double delta_ext, double R, double eps);

// Gap between the symmetrized one-step operator applied to phi at time
// t - eps^2/2 and its second-order expansion at (x,t). Order eps^4 for smooth
// phi and exactly zero (to rounding) for space-quadratic, time-linear phi.
double taylor_residual(const SmoothFunction& phi, const VecN& x, double t, const VecN& nu,
                       const GameParams& params, const BallRule& rule);

struct ErrorTableRow {
  double eps = 0.0;
  double h = 0.0;
  double sup_error = 0.0;
  double runtime_seconds = 0.0;
};

struct ErrorTable {
  std::vector<ErrorTableRow> rows;  // ordered by decreasing eps
  bool monotone = true;
  int first_violation = -1;
};

// Sup-node error of the marching solver against a reference solution for each
// step size, with the lattice spacing tied to eps/8.
ErrorTable convergence_study(const DomainGeometry& domain, const ReferenceSolution& ref,
                             std::vector<double> eps_list, double p, double T,
                             const DirectionSet& dirs_template, int threads = 0);

// Boundary data that holds phi on the initial layer, psi after time eps^2,
// and interpolates linearly in t between phi(., eps^2/2) and psi across
// (eps^2/2, eps^2].
BoundaryData ramp_boundary_data(const std::function<double(const VecN&)>& psi,
                                const std::function<double(const VecN&, double)>& phi_init,
                                const GameParams& params);

enum class BarrierKind { None, Lower, Upper };

struct AsymptoticOptions {
  SolverOptions solver;
  double elliptic_tol = 1e-9;
  long elliptic_max_iter = 1000000;
};

struct AsymptoticResult {
  std::vector<std::pair<long, double>> checkpoints;  // (level K, sup diff vs elliptic)
  // Per-node monotonicity across levels, up to a rounding slack of a few
  // hundred ulp (consecutive levels take different arithmetic paths).
  bool barrier_monotone = true;
  long first_barrier_violation = -1;
  double worst_barrier_violation = 0.0;
  bool diffs_nonincreasing = true;  // beyond level 2, 2*tol slack
  long first_diff_increase = -1;
  double final_diff = 0.0;
  double elliptic_residual = 0.0;
  double elliptic_gap = 0.0;
  long elliptic_iterations = 0;
};

// March the ramp data to the largest requested level and track the sup
// distance to the time-independent solution along the way.
AsymptoticResult asymptotic_study(const DomainGeometry& domain, const GameParams& params,
                                  const std::function<double(const VecN&)>& psi,
                                  const std::function<double(const VecN&, double)>& phi_init,
                                  BarrierKind barrier, const std::vector<long>& K_list,
                                  const DirectionSet& dirs,
                                  const AsymptoticOptions& opts = {});

struct ModulusSampleSpec {
  int pairs = 1000;
  uint64_t seed = 2024;
  double sphere_hint_scale = 0.1;  // exterior-sphere hint as a fraction of diameter
};

struct ModulusScanResult {
  // Smallest constants making the lateral / initial boundary estimates hold
  // over the sampled pairs (0 when the Lipschitz part already covers them).
  double lateral_C = 0.0;
  double initial_C = 0.0;
  int lateral_pairs = 0;
  int initial_pairs = 0;
  double lipschitz_used = 0.0;
};

ModulusScanResult boundary_modulus_scan(const GridFunction& u, const BoundaryData& F,
                                        const DomainGeometry& domain,
                                        const GameParams& params,
                                        const ModulusSampleSpec& spec = {});

}  // namespace towpde
