#pragma once

#include <vector>

#include "towpde/geometry.hpp"
#include "towpde/grid.hpp"
#include "towpde/parallel.hpp"
#include "towpde/quadrature.hpp"

namespace towpde {

struct SolverOptions {
  double h = 0.0;   // lattice spacing; 0 means eps/8
  int threads = 0;  // 0 means hardware
  double resolved_h(double eps) const { return h > 0.0 ? h : eps / 8.0; }
};

// Termination weight evaluated from a precomputed signed distance; matches
// delta_weight on the padded cylinder for t > 0.
inline double delta_from_distance(double dist, double t, double eps) {
  if (dist <= 0.0) return 1.0;
  if (t <= 0.0) return 1.0;
  double space = std::min(1.0, dist / eps);
  double time = std::min(1.0, std::sqrt(2.0 * t) / eps);
  return 1.0 - space * time;
}

// One application of the marching operator at time level t: nodes outside the
// domain take the boundary payoff exactly, interior nodes blend the midrange
// of the one-step operator on the previous slice with the payoff.
template <class Slice>
std::vector<double> apply_T(const Lattice& lat, const Slice& prev, double t,
                            const BoundaryData& F, const GameParams& params,
                            const DomainGeometry& domain, const DirectionSet& dirs,
                            const BallRule& rule, int threads = 0,
                            const std::vector<double>* node_dist = nullptr) {
  std::vector<double> out(lat.node_count());
  parallel_for(lat.node_count(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      VecN x = lat.position(i);
      double dist = node_dist ? (*node_dist)[i] : domain.signed_distance(x);
      if (dist <= 0.0) {
        out[i] = F(x, t);
        continue;
      }
      double delta = delta_from_distance(dist, t, params.eps);
      if (delta >= 1.0) {
        out[i] = F(x, t);
        continue;
      }
      double mid = midrange_over_directions(prev, x, params, dirs, rule).value;
      out[i] = (delta == 0.0) ? mid : (1.0 - delta) * mid + delta * F(x, t);
    }
  });
  return out;
}

// March the dynamic programming principle forward in time, exactly in t:
// level 0 carries the initial payoff, level k applies T to level k-1.
GridFunction solve_parabolic_dpp(const DomainGeometry& domain, const GameParams& params,
                                 const BoundaryData& F, const DirectionSet& dirs,
                                 const SolverOptions& opts = {});

// Max over levels k >= 1 and nodes of |u_k - T(u_{k-1})|. Zero (bit-exact)
// for solver output since it replays the same arithmetic.
double dpp_residual(const GridFunction& u, const GameParams& params,
                    const DomainGeometry& domain, const BoundaryData& F,
                    const DirectionSet& dirs, const SolverOptions& opts = {});

struct CompareResult {
  bool leq = false;
  bool geq = false;
  double leq_violation = 0.0;  // sup (u - v)+
  double geq_violation = 0.0;  // sup (v - u)+
  double max_gap = 0.0;        // sup |u - v|
  bool incomparable() const { return !leq && !geq; }
};

CompareResult compare_solutions(const GridFunction& u, const GridFunction& v);

struct EllipticSolution {
  Lattice lattice;
  std::vector<double> values;
  double residual = 0.0;     // sup |U - T U| at the accepted iterate
  double barrier_gap = 0.0;  // sup gap between the two one-sided runs
  long iterations = 0;       // applications of T per run
  FieldSlice slice() const { return FieldSlice{&lattice, &values}; }
};

// One application of the time-independent operator to nodal values.
std::vector<double> elliptic_apply(const Lattice& lat, const std::vector<double>& prev,
                                   const std::function<double(const VecN&)>& psi,
                                   const GameParams& params, const DomainGeometry& domain,
                                   const DirectionSet& dirs, const BallRule& rule,
                                   int threads = 0,
                                   const std::vector<double>* node_dist = nullptr);

// Picard iteration run simultaneously from the constant lower and upper
// barriers; converged when both residuals fall below tol and the two runs
// agree within 2*tol, which brackets the fixed point to the same accuracy.
EllipticSolution solve_elliptic_dpp(const DomainGeometry& domain, const GameParams& params,
                                    const std::function<double(const VecN&)>& psi,
                                    double tol, long max_iter, const DirectionSet& dirs,
                                    const SolverOptions& opts = {});

}  // namespace towpde
