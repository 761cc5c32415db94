#include "towpde/dpp.hpp"

#include <cmath>
#include <sstream>

namespace towpde {

namespace {

std::vector<double> node_distances(const Lattice& lat, const DomainGeometry& domain) {
  std::vector<double> dist(lat.node_count());
  for (std::size_t i = 0; i < dist.size(); ++i)
    dist[i] = domain.signed_distance(lat.position(i));
  return dist;
}

int level_count_for_horizon(const GameParams& params) {
  return static_cast<int>(std::ceil(2.0 * params.T / (params.eps * params.eps) - 1e-9));
}

}  // namespace

GridFunction solve_parabolic_dpp(const DomainGeometry& domain, const GameParams& params,
                                 const BoundaryData& F, const DirectionSet& dirs,
                                 const SolverOptions& opts) {
  if (domain.dim() != params.n)
    throw ValidationError("solve_parabolic_dpp: domain/params dimension mismatch");
  if (dirs.n != params.n)
    throw ValidationError("solve_parabolic_dpp: direction set dimension mismatch");
  const double h = opts.resolved_h(params.eps);
  Lattice lat = Lattice::cover(domain, params.eps, h);
  const int K = level_count_for_horizon(params);
  GridFunction u(lat, params, K + 1);

  const std::vector<double> dist = node_distances(lat, domain);
  const BallRule rule = BallRule::make(params.n);

  auto& initial = u.level(0);
  for (std::size_t i = 0; i < lat.node_count(); ++i) initial[i] = F(lat.position(i), 0.0);

  for (int k = 1; k <= K; ++k) {
    LevelSlice prev{&u, k - 1};
    u.level(k) = apply_T(lat, prev, u.level_time(k), F, params, domain, dirs, rule,
                         opts.threads, &dist);
  }
  return u;
}

double dpp_residual(const GridFunction& u, const GameParams& params,
                    const DomainGeometry& domain, const BoundaryData& F,
                    const DirectionSet& dirs, const SolverOptions& opts) {
  const Lattice& lat = u.lattice();
  const std::vector<double> dist = node_distances(lat, domain);
  const BallRule rule = BallRule::make(params.n);
  double worst = 0.0;
  for (int k = 1; k <= u.last_level(); ++k) {
    LevelSlice prev{&u, k - 1};
    std::vector<double> replay = apply_T(lat, prev, u.level_time(k), F, params, domain,
                                         dirs, rule, opts.threads, &dist);
    const auto& actual = u.level(k);
    for (std::size_t i = 0; i < replay.size(); ++i)
      worst = std::max(worst, std::abs(actual[i] - replay[i]));
  }
  return worst;
}

CompareResult compare_solutions(const GridFunction& u, const GridFunction& v) {
  const Lattice &a = u.lattice(), &b = v.lattice();
  bool same = a.n == b.n && a.h == b.h && u.level_count() == v.level_count();
  for (int i = 0; same && i < a.n; ++i)
    same = a.origin[i] == b.origin[i] &&
           a.counts[static_cast<size_t>(i)] == b.counts[static_cast<size_t>(i)];
  if (!same) throw ValidationError("compare_solutions: lattice mismatch");

  double above = 0.0, below = 0.0;  // sup (u-v)+ and sup (v-u)+
  for (int k = 0; k < u.level_count(); ++k) {
    const auto& uk = u.level(k);
    const auto& vk = v.level(k);
    for (std::size_t i = 0; i < uk.size(); ++i) {
      double d = uk[i] - vk[i];
      if (d > above) above = d;
      if (-d > below) below = -d;
    }
  }
  CompareResult r;
  r.leq = above <= 0.0;
  r.geq = below <= 0.0;
  r.leq_violation = above;
  r.geq_violation = below;
  r.max_gap = std::max(above, below);
  return r;
}

std::vector<double> elliptic_apply(const Lattice& lat, const std::vector<double>& prev,
                                   const std::function<double(const VecN&)>& psi,
                                   const GameParams& params, const DomainGeometry& domain,
                                   const DirectionSet& dirs, const BallRule& rule,
                                   int threads, const std::vector<double>* node_dist) {
  std::vector<double> out(lat.node_count());
  FieldSlice slice{&lat, &prev};
  parallel_for(lat.node_count(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      VecN x = lat.position(i);
      double dist = node_dist ? (*node_dist)[i] : domain.signed_distance(x);
      if (dist <= 0.0) {
        out[i] = psi(x);
        continue;
      }
      double delta = dist >= params.eps ? 0.0 : 1.0 - dist / params.eps;
      double mid = midrange_over_directions(slice, x, params, dirs, rule).value;
      out[i] = (delta == 0.0) ? mid : (1.0 - delta) * mid + delta * psi(x);
    }
  });
  return out;
}

EllipticSolution solve_elliptic_dpp(const DomainGeometry& domain, const GameParams& params,
                                    const std::function<double(const VecN&)>& psi,
                                    double tol, long max_iter, const DirectionSet& dirs,
                                    const SolverOptions& opts) {
  if (!(tol > 0.0)) throw ValidationError("solve_elliptic_dpp: tol must be positive");
  const double h = opts.resolved_h(params.eps);
  Lattice lat = Lattice::cover(domain, params.eps, h);
  const std::vector<double> dist = node_distances(lat, domain);
  const BallRule rule = BallRule::make(params.n);

  // Barrier constants over the nodes where psi actually enters the operator.
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < lat.node_count(); ++i) {
    if (dist[i] < params.eps) {
      double v = psi(lat.position(i));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw ValidationError("solve_elliptic_dpp: psi is unbounded on the boundary strip");

  std::vector<double> lower(lat.node_count(), lo), upper(lat.node_count(), hi);
  double res_lo = 0.0, res_hi = 0.0, gap = 0.0;
  long iter = 0;
  while (true) {
    ++iter;
    std::vector<double> next_lo = elliptic_apply(lat, lower, psi, params, domain, dirs,
                                                 rule, opts.threads, &dist);
    std::vector<double> next_hi = elliptic_apply(lat, upper, psi, params, domain, dirs,
                                                 rule, opts.threads, &dist);
    res_lo = res_hi = gap = 0.0;
    for (std::size_t i = 0; i < lat.node_count(); ++i) {
      res_lo = std::max(res_lo, std::abs(next_lo[i] - lower[i]));
      res_hi = std::max(res_hi, std::abs(next_hi[i] - upper[i]));
      gap = std::max(gap, std::abs(next_hi[i] - next_lo[i]));
    }
    lower.swap(next_lo);
    upper.swap(next_hi);
    if (res_lo <= tol && res_hi <= tol && gap <= 2.0 * tol) break;
    if (iter >= max_iter) {
      std::ostringstream os;
      os << "solve_elliptic_dpp: no convergence after " << iter
         << " iterations (residuals " << res_lo << ", " << res_hi << ", gap " << gap << ")";
      throw NumericalError(os.str());
    }
  }

  EllipticSolution sol;
  sol.lattice = lat;
  sol.values = std::move(lower);
  sol.residual = res_lo;
  sol.barrier_gap = gap;
  sol.iterations = iter;
  return sol;
}

}  // namespace towpde
