#include "towpde/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "towpde/rng.hpp"

namespace towpde {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

ReferenceSolution heat_reference() {
  SmoothFunction f;
  f.value = [](const VecN& x, double t) {
    return std::exp(-kPi * kPi * t / 3.0) * std::sin(kPi * x[0]);
  };
  f.time_deriv = [](const VecN& x, double t) {
    return -kPi * kPi / 3.0 * std::exp(-kPi * kPi * t / 3.0) * std::sin(kPi * x[0]);
  };
  f.gradient = [](const VecN& x, double t) {
    return VecN(kPi * std::exp(-kPi * kPi * t / 3.0) * std::cos(kPi * x[0]));
  };
  f.hessian = [](const VecN& x, double t) {
    Mat3 H{};
    H[0][0] = -kPi * kPi * std::exp(-kPi * kPi * t / 3.0) * std::sin(kPi * x[0]);
    return H;
  };
  return ReferenceSolution{ReferenceKind::HeatEigen, std::move(f)};
}

RadialW RadialW::make(int n, double alpha, double delta_ext, double R, double eps) {
  if (n < 1 || n > 3) throw ValidationError("RadialW: n must be 1..3");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("RadialW: alpha in (0,1)");
  if (!(delta_ext > 0.0 && delta_ext < R)) throw ValidationError("RadialW: 0 < delta < R");
  RadialW w;
  w.n = n;
  w.alpha = alpha;
  w.delta_ext = delta_ext;
  w.R = R;
  w.eps = eps;
  const double edge = R + eps;
  w.log_branch = std::abs(alpha - (n - 1) / (2.0 * n)) <= 1e-10;
  if (w.log_branch) {
    w.quad_coef = static_cast<double>(n) / (n - 1);
    w.c1 = 2.0 * n / (n - 1.0) * edge * edge;
    w.c2 = w.quad_coef * delta_ext * delta_ext - w.c1 * std::log(delta_ext);
  } else {
    w.quad_coef = (n + 1.0) / (2.0 * alpha + n - 1.0);
    w.gamma = (2.0 * alpha * n - n + 1.0) / ((n + 1.0) * alpha);
    w.c1 = 2.0 * (n + 1.0) * (n + 1.0) * alpha /
           ((2.0 * alpha + n - 1.0) * (2.0 * alpha * n - n + 1.0)) *
           std::pow(edge, (n + 2.0 * alpha - 1.0) / ((n + 1.0) * alpha));
    w.c2 = w.quad_coef * delta_ext * delta_ext - w.c1 * std::pow(delta_ext, w.gamma);
  }
  return w;
}

void RadialW::check_range(double r) const {
  if (!(r > delta_ext - eps && r <= R + eps + 1e-12))
    throw ValidationError("RadialW: radius outside (delta-eps, R+eps]");
}

double RadialW::value(double r) const {
  check_range(r);
  if (log_branch) return -quad_coef * r * r + c1 * std::log(r) + c2;
  return -quad_coef * r * r + c1 * std::pow(r, gamma) + c2;
}

double RadialW::deriv(double r) const {
  check_range(r);
  if (log_branch) return -2.0 * quad_coef * r + c1 / r;
  return -2.0 * quad_coef * r + c1 * gamma * std::pow(r, gamma - 1.0);
}

double RadialW::second(double r) const {
  check_range(r);
  if (log_branch) return -2.0 * quad_coef - c1 / (r * r);
  return -2.0 * quad_coef + c1 * gamma * (gamma - 1.0) * std::pow(r, gamma - 2.0);
}

double RadialW::ode_residual(double r) const {
  return (1.0 - alpha) / (2.0 * r) * (n - 1.0) / (n + 1.0) * deriv(r) +
         0.5 * alpha * second(r) + 1.0;
}

double radial_w(double r, int n, double alpha, double delta_ext, double R, double eps) {
  return RadialW::make(n, alpha, delta_ext, R, eps).value(r);
}

double taylor_residual(const SmoothFunction& phi, const VecN& x, double t, const VecN& nu,
                       const GameParams& params, const BallRule& rule) {
  const double eps = params.eps;
  const double tm = t - 0.5 * eps * eps;
  auto slice = [&](const VecN& y) { return phi.value(y, tm); };

  double numeric = 0.5 * params.alpha * (slice(x + nu * eps) + slice(x - nu * eps)) +
                   params.beta * ball_average(slice, x, nu, eps, rule);

  const Mat3 H = phi.hessian(x, t);
  const double radial = quadratic_form(H, nu);
  const double orth = trace(H, params.n) - radial;  // Laplacian on nu-orthogonal space
  double predicted = phi.value(x, t) - 0.5 * eps * eps * phi.time_deriv(x, t) +
                     0.5 * eps * eps * params.alpha * radial +
                     eps * eps * params.beta / (2.0 * (params.n + 1.0)) * orth;
  return std::abs(numeric - predicted);
}

ErrorTable convergence_study(const DomainGeometry& domain, const ReferenceSolution& ref,
                             std::vector<double> eps_list, double p, double T,
                             const DirectionSet& dirs_template, int threads) {
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
  ErrorTable table;
  const BoundaryData F = ref.fn.boundary_data();

  for (double eps : eps_list) {
    GameParams params = GameParams::from_p(domain.dim(), eps, p, T);
    SolverOptions opts;
    opts.h = eps / 8.0;
    opts.threads = threads;
    DirectionSet dirs = DirectionSet::make(domain.dim(),
                                           static_cast<int>(dirs_template.vectors.size()),
                                           dirs_template.refinement, dirs_template.theta_tol);

    auto t0 = std::chrono::steady_clock::now();
    GridFunction u = solve_parabolic_dpp(domain, params, F, dirs, opts);
    auto t1 = std::chrono::steady_clock::now();

    double sup = 0.0;
    for (int k = 0; k < u.level_count(); ++k) {
      double tk = u.level_time(k);
      const auto& values = u.level(k);
      for (std::size_t i = 0; i < values.size(); ++i) {
        VecN xi = u.lattice().position(i);
        sup = std::max(sup, std::abs(values[i] - ref.fn.value(xi, tk)));
      }
    }
    table.rows.push_back(
        {eps, opts.h, sup, std::chrono::duration<double>(t1 - t0).count()});
  }

  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (!(table.rows[i].sup_error < table.rows[i - 1].sup_error)) {
      table.monotone = false;
      if (table.first_violation < 0) table.first_violation = static_cast<int>(i);
    }
  }
  return table;
}

BoundaryData ramp_boundary_data(const std::function<double(const VecN&)>& psi,
                                const std::function<double(const VecN&, double)>& phi_init,
                                const GameParams& params) {
  const double e2 = params.eps * params.eps;
  return BoundaryData{
      [psi, phi_init, e2](const SpaceTimePoint& z) {
        if (z.t > e2) return psi(z.x);
        if (z.t > 0.5 * e2) {
          double base = phi_init(z.x, 0.5 * e2);
          double w = 2.0 * z.t / e2 - 1.0;  // 0 at eps^2/2, 1 at eps^2
          return base + w * (psi(z.x) - base);
        }
        return phi_init(z.x, z.t);
      },
      std::nullopt};
}

AsymptoticResult asymptotic_study(const DomainGeometry& domain, const GameParams& params,
                                  const std::function<double(const VecN&)>& psi,
                                  const std::function<double(const VecN&, double)>& phi_init,
                                  BarrierKind barrier, const std::vector<long>& K_list,
                                  const DirectionSet& dirs, const AsymptoticOptions& opts) {
  if (K_list.empty()) throw ValidationError("asymptotic_study: empty level list");
  long max_K = *std::max_element(K_list.begin(), K_list.end());
  if (max_K < 1) throw ValidationError("asymptotic_study: levels must be positive");

  AsymptoticResult result;
  EllipticSolution U = solve_elliptic_dpp(domain, params, psi, opts.elliptic_tol,
                                          opts.elliptic_max_iter, dirs, opts.solver);
  result.elliptic_residual = U.residual;
  result.elliptic_gap = U.barrier_gap;
  result.elliptic_iterations = U.iterations;

  const Lattice& lat = U.lattice;
  std::vector<double> dist(lat.node_count());
  for (std::size_t i = 0; i < dist.size(); ++i)
    dist[i] = domain.signed_distance(lat.position(i));
  const BallRule rule = BallRule::make(params.n);
  const BoundaryData F = ramp_boundary_data(psi, phi_init, params);

  std::vector<double> cur(lat.node_count());
  for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = F(lat.position(i), 0.0);

  auto sup_diff = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s = std::max(s, std::abs(v[i] - U.values[i]));
    return s;
  };

  double scale = 1.0;
  for (double v : cur) scale = std::max(scale, std::abs(v));
  const double fp_slack = 1e-13 * scale;

  double prev_diff = sup_diff(cur);
  const double slack = 2.0 * opts.elliptic_tol;
  for (long k = 1; k <= max_K; ++k) {
    FieldSlice prev{&lat, &cur};
    std::vector<double> next = apply_T(lat, prev, static_cast<double>(k) * params.time_step(),
                                       F, params, domain, dirs, rule, opts.solver.threads,
                                       &dist);
    if (barrier != BarrierKind::None) {
      for (std::size_t i = 0; i < next.size(); ++i) {
        double violation = barrier == BarrierKind::Lower ? cur[i] - next[i] : next[i] - cur[i];
        if (violation > result.worst_barrier_violation)
          result.worst_barrier_violation = violation;
        if (violation > fp_slack && result.barrier_monotone) {
          result.barrier_monotone = false;
          result.first_barrier_violation = k;
        }
      }
    }
    cur.swap(next);
    double diff = sup_diff(cur);
    if (k > 2 && diff > prev_diff + slack && result.diffs_nonincreasing) {
      result.diffs_nonincreasing = false;
      result.first_diff_increase = k;
    }
    if (k >= 2) prev_diff = diff;
    if (std::find(K_list.begin(), K_list.end(), k) != K_list.end())
      result.checkpoints.emplace_back(k, diff);
    if (k == max_K) result.final_diff = diff;
  }
  return result;
}

ModulusScanResult boundary_modulus_scan(const GridFunction& u, const BoundaryData& F,
                                        const DomainGeometry& domain,
                                        const GameParams& params,
                                        const ModulusSampleSpec& spec) {
  if (!F.lipschitz.has_value())
    throw ValidationError("boundary_modulus_scan: boundary data needs a Lipschitz constant");
  const double L = *F.lipschitz;
  const double eps = params.eps;
  const double dt = params.time_step();
  const int levels = u.level_count();
  const double hint = spec.sphere_hint_scale * domain.diameter();
  Xoshiro256pp rng(spec.seed, 0);

  ModulusScanResult result;
  result.lipschitz_used = L;

  auto random_interior = [&](double max_depth) {
    // Rejection sample x in the domain, at most max_depth from the boundary.
    for (int attempt = 0; attempt < 4000; ++attempt) {
      VecN x = VecN::zero(domain.dim());
      for (int a = 0; a < domain.dim(); ++a) {
        double lo = domain.bbox_lo()[a], hi = domain.bbox_hi()[a];
        x[a] = lo + (hi - lo) * rng.uniform01();
      }
      double d = domain.signed_distance(x);
      if (d > 0.0 && d <= max_depth) return x;
    }
    throw NumericalError("boundary_modulus_scan: interior sampling failed");
  };

  const int per_stratum = std::max(1, spec.pairs / 3);
  // Lateral pairs: interior point against a point of the outer collar, both
  // near the same boundary point; plus deep-interior-vs-collar pairs.
  for (int stratum = 0; stratum < 2; ++stratum) {
    for (int i = 0; i < per_stratum; ++i) {
      double depth = stratum == 0 ? 2.0 * eps : 0.45 * domain.diameter();
      VecN x = random_interior(depth);
      VecN yb = domain.project_to_boundary(x);
      VecN out_dir = yb - x;
      double len = out_dir.norm();
      if (len < 1e-12) continue;
      out_dir = out_dir * (1.0 / len);
      double rho = eps * (0.05 + 0.9 * rng.uniform01());
      VecN y = yb + out_dir * rho;
      if (domain.signed_distance(y) > 0.0) continue;  // nonconvex reach-around
      int kt = 1 + static_cast<int>(rng.uniform01() * (levels - 1));
      kt = std::min(kt, levels - 1);
      double t = dt * kt;
      double s = rng.uniform01() < 0.5 ? t : std::min(params.T, t + dt * (rng.uniform01() * 4.0));
      double sphere = domain.exterior_sphere(yb, hint).radius;
      double du = std::abs(u.interpolate(kt, x) - F(y, s));
      double lip = L * ((x - y).norm() + std::sqrt(std::abs(t - s)) + 2.0 * sphere);
      double K = std::min((x - y).norm(), t) + eps;
      double c = (du - lip) / (K + std::sqrt(K));
      result.lateral_C = std::max(result.lateral_C, std::max(0.0, c));
      ++result.lateral_pairs;
    }
  }

  // Initial pairs: interior point at positive time against a pre-initial one.
  for (int i = 0; i < per_stratum; ++i) {
    VecN x = random_interior(0.45 * domain.diameter());
    VecN y = random_interior(0.45 * domain.diameter());
    int kt = 1 + static_cast<int>(rng.uniform01() * (levels - 1));
    kt = std::min(kt, levels - 1);
    double t = dt * kt;
    double s = -0.5 * eps * eps * rng.uniform01() * 0.99;
    double du = std::abs(u.interpolate(kt, x) - F(y, s));
    double c = du / ((x - y).norm() + std::sqrt(t) + eps);
    result.initial_C = std::max(result.initial_C, c);
    ++result.initial_pairs;
  }
  return result;
}

}  // namespace towpde
