#include "towpde/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "towpde/game.hpp"
#include "towpde/io.hpp"

namespace towpde {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::ofstream open_artifact(const fs::path& dir, const std::string& name,
                            std::vector<std::string>& written) {
  fs::path p = dir / name;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ValidationError("cannot write output file " + p.string());
  written.push_back(name);
  return out;
}

json domain_json(const DomainGeometry& d) {
  json j;
  switch (d.kind()) {
    case DomainKind::Interval:
      j["kind"] = "interval";
      j["a"] = d.param_lo()[0];
      j["b"] = d.param_hi()[0];
      break;
    case DomainKind::Box: {
      j["kind"] = "box";
      json lo = json::array(), hi = json::array();
      for (int a = 0; a < d.dim(); ++a) {
        lo.push_back(d.param_lo()[a]);
        hi.push_back(d.param_hi()[a]);
      }
      j["lo"] = lo;
      j["hi"] = hi;
      break;
    }
    case DomainKind::Ball:
    case DomainKind::Annulus: {
      j["kind"] = d.kind() == DomainKind::Ball ? "ball" : "annulus";
      json c = json::array();
      for (int a = 0; a < d.dim(); ++a) c.push_back(d.param_center()[a]);
      j["center"] = c;
      if (d.kind() == DomainKind::Ball) {
        j["radius"] = d.param_r_outer();
      } else {
        j["r_inner"] = d.param_r_inner();
        j["r_outer"] = d.param_r_outer();
      }
      break;
    }
  }
  j["enclosing_radius"] = d.enclosing_radius();
  return j;
}

json params_json(const GameParams& p) {
  return json{{"n", p.n},   {"eps", p.eps}, {"alpha", p.alpha},
              {"beta", p.beta}, {"p", p.p},   {"T", p.T}};
}

json dirs_json(const DirectionSet& d) {
  return json{{"count", d.vectors.size()},
              {"theta_tol", d.theta_tol},
              {"refine", d.refinement == Refinement::LocalBracket ? "local_bracket" : "none"}};
}

std::vector<VecN> parse_points(const std::string& raw, int n) {
  std::vector<VecN> points;
  std::stringstream groups(raw);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::istringstream ss(group);
    std::vector<double> coords;
    double v;
    while (ss >> v) coords.push_back(v);
    if (coords.empty()) continue;
    if (coords.size() != static_cast<std::size_t>(n))
      throw ValidationError("config: [run] start point needs " + std::to_string(n) +
                            " coordinates");
    VecN x = VecN::zero(n);
    for (int a = 0; a < n; ++a) x[a] = coords[static_cast<std::size_t>(a)];
    points.push_back(x);
  }
  if (points.empty()) throw ValidationError("config: [run] start is required");
  return points;
}

// Constant barrier level: extremum of psi over the nodes where it enters the
// scheme (the eps-collar on both sides of the boundary).
double barrier_level(const DomainGeometry& domain, const GameParams& params, double h,
                     const std::function<double(const VecN&)>& psi, bool lower) {
  Lattice lat = Lattice::cover(domain, params.eps, h);
  double best = lower ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lat.node_count(); ++i) {
    VecN x = lat.position(i);
    if (domain.signed_distance(x) < params.eps) {
      double v = psi(x);
      best = lower ? std::min(best, v) : std::max(best, v);
    }
  }
  return best;
}

struct RunContext {
  const RunRequest& req;
  const IniDoc& ini;
  fs::path out_dir;
  std::vector<std::string> written;
  json results;

  uint64_t seed() const {
    return req.seed_from_cli ? req.config.seed : ini.get_u64("mc", "seed", 42);
  }
  SolverOptions solver_options(const GameParams& params) const {
    SolverOptions opts;
    opts.h = ini.get_double("grid", "h", 0.0);
    (void)params;
    opts.threads = req.config.threads;
    return opts;
  }
};

void run_solve(RunContext& ctx) {
  DomainGeometry domain = domain_from_config(ctx.ini);
  GameParams params = params_from_config(ctx.ini, domain);
  DirectionSet dirs = dirs_from_config(ctx.ini, params.n);
  DataSpec data = data_from_config(ctx.ini, params);
  SolverOptions opts = ctx.solver_options(params);

  GridFunction u = solve_parabolic_dpp(domain, params, data.F, dirs, opts);
  auto csv = open_artifact(ctx.out_dir, "solution.csv", ctx.written);
  write_grid_csv(csv, u);

  ctx.results["levels"] = u.level_count();
  ctx.results["K"] = u.last_level();
  ctx.results["nodes"] = u.lattice().node_count();
  ctx.results["h"] = u.lattice().h;
  if (ctx.ini.get_bool("run", "check_residual", false)) {
    ctx.results["dpp_residual"] = dpp_residual(u, params, domain, data.F, dirs, opts);
  }
}

void run_elliptic(RunContext& ctx) {
  DomainGeometry domain = domain_from_config(ctx.ini);
  GameParams params = params_from_config(ctx.ini, domain);
  DirectionSet dirs = dirs_from_config(ctx.ini, params.n);
  DataSpec data = data_from_config(ctx.ini, params);
  SolverOptions opts = ctx.solver_options(params);
  double tol = ctx.ini.get_double("run", "tol", 1e-9);
  long max_iter = ctx.ini.get_long("run", "max_iter", 1000000);

  EllipticSolution sol = solve_elliptic_dpp(domain, params, data.psi, tol, max_iter, dirs, opts);
  auto csv = open_artifact(ctx.out_dir, "elliptic.csv", ctx.written);
  write_field_csv(csv, sol.lattice, sol.values);

  ctx.results["residual"] = sol.residual;
  ctx.results["barrier_gap"] = sol.barrier_gap;
  ctx.results["iterations"] = sol.iterations;
}

void run_simulate(RunContext& ctx) {
  DomainGeometry domain = domain_from_config(ctx.ini);
  GameParams params = params_from_config(ctx.ini, domain);
  DirectionSet dirs = dirs_from_config(ctx.ini, params.n);
  DataSpec data = data_from_config(ctx.ini, params);
  SolverOptions opts = ctx.solver_options(params);

  long samples = ctx.ini.get_long("mc", "samples", 10000);
  if (samples < 2) throw ValidationError("simulate: M >= 2 required");
  double t0 = ctx.ini.get_double("run", "t0", params.T);
  double steps = t0 / params.time_step();
  if (std::abs(steps - std::round(steps)) > 1e-6)
    throw ValidationError("simulate: t0 must be a multiple of eps^2/2");
  if (t0 > params.T + 1e-12) throw ValidationError("simulate: t0 must not exceed T");
  std::vector<VecN> starts = parse_points(ctx.ini.require("run", "start"), params.n);

  GridFunction u = solve_parabolic_dpp(domain, params, data.F, dirs, opts);
  Strategy maximizer = greedy_strategy(u, Player::I, dirs);
  Strategy minimizer = greedy_strategy(u, Player::II, dirs);
  RngSpec rng{ctx.seed()};

  std::vector<EstimateRecord> records;
  json estimates = json::array();
  for (std::size_t i = 0; i < starts.size(); ++i) {
    SpaceTimePoint z0{starts[i], t0};
    // Stream block per start point keeps estimates independent.
    RngSpec point_rng{rng.master_seed + 0x1000000ULL * i};
    ValueEstimate est = estimate_value(z0, maximizer, minimizer, params, domain, data.F,
                                       static_cast<std::size_t>(samples), point_rng,
                                       ctx.req.config.threads);
    records.push_back({z0, est});
    double grid_value = u.interpolate(u.level_of_time(t0), starts[i]);
    json rec{{"t0", t0},       {"mean", est.mean},           {"stderr", est.stderr_},
             {"samples", est.samples}, {"grid_value", grid_value}};
    json coords = json::array();
    for (int a = 0; a < params.n; ++a) coords.push_back(starts[i][a]);
    rec["x"] = coords;
    estimates.push_back(rec);
  }
  auto csv = open_artifact(ctx.out_dir, "estimates.csv", ctx.written);
  write_estimates_csv(csv, records);
  ctx.results["estimates"] = estimates;

  if (ctx.ini.get_bool("mc", "dump_trajectories", false)) {
    long dump_count = std::min<long>(samples, ctx.ini.get_long("mc", "dump_count", 100));
    auto trajs = simulate_trajectories(SpaceTimePoint{starts[0], t0}, maximizer, minimizer,
                                       params, domain, data.F,
                                       static_cast<std::size_t>(dump_count), rng,
                                       ctx.req.config.threads);
    auto tcsv = open_artifact(ctx.out_dir, "trajectories.csv", ctx.written);
    write_trajectories_csv(tcsv, trajs);
  }
}

void run_exit_time(RunContext& ctx) {
  DomainGeometry domain = domain_from_config(ctx.ini);
  GameParams params = params_from_config(ctx.ini, domain);
  double delta_ext = ctx.ini.get_double("run", "delta_ext", 0.25);
  double R = ctx.ini.get_double("run", "R", domain.enclosing_radius());
  std::vector<double> radii = ctx.ini.get_list("run", "radii");
  if (radii.empty()) throw ValidationError("config: [run] radii is required for exit-time");
  long samples = ctx.ini.get_long("mc", "samples", 2000);
  if (samples < 2) throw ValidationError("exit-time: M >= 2 required");

  VecN z = domain.enclosing_center();
  RngSpec rng{ctx.seed()};
  std::vector<ExitTimeRecord> records;
  json rows = json::array();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    VecN x0 = z;
    x0[0] += radii[i];
    RngSpec run_rng{rng.master_seed + 0x1000000ULL * i};
    ValueEstimate est = annulus_exit_time(x0, z, delta_ext, R, params,
                                          static_cast<std::size_t>(samples), run_rng,
                                          ctx.req.config.threads);
    ExitTimeRecord rec;
    rec.alpha = params.alpha;
    rec.eps = params.eps;
    rec.start_radius = radii[i];
    rec.estimate = est;
    rec.normalized =
        params.eps * params.eps * est.mean / (radii[i] - delta_ext + params.eps);
    records.push_back(rec);
    rows.push_back(json{{"start_radius", radii[i]},
                        {"mean_tau", est.mean},
                        {"stderr", est.stderr_},
                        {"normalized", rec.normalized}});
  }
  auto csv = open_artifact(ctx.out_dir, "exit_time.csv", ctx.written);
  write_exit_time_csv(csv, records);
  ctx.results["records"] = rows;
}

void run_asymptotics(RunContext& ctx) {
  DomainGeometry domain = domain_from_config(ctx.ini);
  GameParams params = params_from_config(ctx.ini, domain);
  DirectionSet dirs = dirs_from_config(ctx.ini, params.n);
  DataSpec data = data_from_config(ctx.ini, params);
  AsymptoticOptions opts;
  opts.solver = ctx.solver_options(params);
  opts.elliptic_tol = ctx.ini.get_double("run", "tol", 1e-9);
  opts.elliptic_max_iter = ctx.ini.get_long("run", "max_iter", 1000000);

  std::vector<long> K_list;
  for (double v : ctx.ini.get_list("run", "levels")) K_list.push_back(static_cast<long>(v));
  if (K_list.empty()) throw ValidationError("config: [run] levels is required for asymptotics");

  std::string barrier_name = ctx.ini.get("run", "barrier", "none");
  BarrierKind barrier = BarrierKind::None;
  std::function<double(const VecN&, double)> phi = data.phi_init;
  double h = opts.solver.resolved_h(params.eps);
  if (barrier_name == "lower") {
    barrier = BarrierKind::Lower;
    double level = barrier_level(domain, params, h, data.psi, true);
    phi = [level](const VecN&, double) { return level; };
  } else if (barrier_name == "upper") {
    barrier = BarrierKind::Upper;
    double level = barrier_level(domain, params, h, data.psi, false);
    phi = [level](const VecN&, double) { return level; };
  } else if (barrier_name != "none") {
    throw ValidationError("config: [run] barrier must be lower, upper or none");
  }

  AsymptoticResult res = asymptotic_study(domain, params, data.psi, phi, barrier, K_list,
                                          dirs, opts);
  auto csv = open_artifact(ctx.out_dir, "asymptotics.csv", ctx.written);
  write_asymptotics_csv(csv, res);
  ctx.results["barrier"] = barrier_name;
  ctx.results["barrier_monotone"] = res.barrier_monotone;
  ctx.results["diffs_nonincreasing"] = res.diffs_nonincreasing;
  ctx.results["final_diff"] = res.final_diff;
  ctx.results["elliptic_iterations"] = res.elliptic_iterations;
  ctx.results["elliptic_residual"] = res.elliptic_residual;
}

void run_converge(RunContext& ctx) {
  DomainGeometry domain = domain_from_config(ctx.ini);
  GameParams params = params_from_config(ctx.ini, domain);
  DirectionSet dirs = dirs_from_config(ctx.ini, params.n);
  DataSpec data = data_from_config(ctx.ini, params);
  std::vector<double> eps_list = ctx.ini.get_list("run", "eps_list");
  if (eps_list.empty()) throw ValidationError("config: [run] eps_list is required for converge");

  ReferenceSolution ref;
  if (data.name == "heat_eigen") {
    ref = heat_reference();
  } else if (data.name == "constant") {
    double c = ctx.ini.get_double("data", "value", 1.0);
    SmoothFunction f;
    f.value = [c](const VecN&, double) { return c; };
    f.time_deriv = [](const VecN&, double) { return 0.0; };
    f.gradient = [](const VecN& x, double) { return VecN::zero(x.n); };
    f.hessian = [](const VecN&, double) { return Mat3{}; };
    ref = ReferenceSolution{ReferenceKind::CustomSmooth, std::move(f)};
  } else {
    throw ValidationError("converge: data f must be heat_eigen or constant");
  }

  ErrorTable table = convergence_study(domain, ref, eps_list, params.p, params.T, dirs,
                                       ctx.req.config.threads);
  auto csv = open_artifact(ctx.out_dir, "error_table.csv", ctx.written);
  write_error_table_csv(csv, table);
  ctx.results["monotone"] = table.monotone;
  ctx.results["first_violation"] = table.first_violation;
  json rows = json::array();
  for (const auto& r : table.rows)
    rows.push_back(json{{"eps", r.eps}, {"sup_error", r.sup_error}});
  ctx.results["rows"] = rows;
}

void run_scan(RunContext& ctx) {
  DomainGeometry domain = domain_from_config(ctx.ini);
  GameParams base = params_from_config(ctx.ini, domain);
  DataSpec probe = data_from_config(ctx.ini, base);
  if (!probe.F.lipschitz.has_value())
    throw ValidationError("scan: [data] lipschitz is required");
  std::vector<double> eps_list = ctx.ini.get_list("run", "eps_list");
  if (eps_list.empty()) eps_list.push_back(base.eps);

  ModulusSampleSpec spec;
  spec.pairs = static_cast<int>(ctx.ini.get_long("run", "pairs", 1000));
  spec.seed = ctx.seed();

  std::vector<ScanRecord> records;
  json rows = json::array();
  for (double eps : eps_list) {
    GameParams params = GameParams::from_p(base.n, eps, base.p, base.T);
    DirectionSet dirs = dirs_from_config(ctx.ini, params.n);
    DataSpec data = data_from_config(ctx.ini, params);
    SolverOptions opts = ctx.solver_options(params);
    opts.h = eps / 8.0;
    GridFunction u = solve_parabolic_dpp(domain, params, data.F, dirs, opts);
    ModulusScanResult scan = boundary_modulus_scan(u, data.F, domain, params, spec);
    records.push_back({eps, scan});
    rows.push_back(json{{"eps", eps},
                        {"lateral_C", scan.lateral_C},
                        {"initial_C", scan.initial_C}});
  }
  auto csv = open_artifact(ctx.out_dir, "modulus_scan.csv", ctx.written);
  write_scan_csv(csv, records);
  ctx.results["records"] = rows;
  ctx.results["seed"] = spec.seed;
}

json config_echo(const RunContext& ctx) {
  json echo;
  echo["subcommand"] = ctx.req.config.subcommand;
  echo["config_path"] = ctx.req.config.config_path;
  echo["out_dir"] = ctx.req.config.out_dir;
  echo["seed"] = ctx.seed();
  echo["threads"] = ctx.req.config.threads;
  json sections;
  for (const auto& [name, kv] : ctx.ini.sections()) {
    json sec;
    for (const auto& [k, v] : kv) sec[k] = v;
    sections[name.empty() ? "(top)" : name] = sec;
  }
  echo["file"] = sections;
  // Resolved numerical context, defaults included.
  try {
    DomainGeometry domain = domain_from_config(ctx.ini);
    echo["domain"] = domain_json(domain);
    GameParams params = params_from_config(ctx.ini, domain);
    echo["params"] = params_json(params);
    echo["dirs"] = dirs_json(dirs_from_config(ctx.ini, params.n));
    echo["grid_h"] = ctx.ini.get_double("grid", "h", params.eps / 8.0);
  } catch (const ValidationError&) {
    // Subcommands that do not need a domain (none today) would land here.
  }
  return echo;
}

}  // namespace

void run(const RunRequest& request) {
  const RunConfig& cfg = request.config;
  RunContext ctx{request, cfg.ini, fs::path(cfg.out_dir), {}, json::object()};

  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec || !fs::is_directory(ctx.out_dir))
    throw ValidationError("cannot create output directory " + cfg.out_dir);
  {
    std::ofstream probe(ctx.out_dir / ".write_probe", std::ios::trunc);
    if (!probe) throw ValidationError("output directory is not writable: " + cfg.out_dir);
  }
  fs::remove(ctx.out_dir / ".write_probe", ec);

  auto t0 = std::chrono::steady_clock::now();
  if (cfg.subcommand == "solve") {
    run_solve(ctx);
  } else if (cfg.subcommand == "elliptic") {
    run_elliptic(ctx);
  } else if (cfg.subcommand == "simulate") {
    run_simulate(ctx);
  } else if (cfg.subcommand == "exit-time") {
    run_exit_time(ctx);
  } else if (cfg.subcommand == "asymptotics") {
    run_asymptotics(ctx);
  } else if (cfg.subcommand == "converge") {
    run_converge(ctx);
  } else if (cfg.subcommand == "scan") {
    run_scan(ctx);
  } else {
    throw ValidationError("unknown subcommand '" + cfg.subcommand + "'");
  }
  auto t1 = std::chrono::steady_clock::now();

  json meta;
  meta["schema"] = "towpde.meta.v1";
  meta["version"] = kLibraryVersion;
  meta["config"] = config_echo(ctx);
  meta["outputs"] = ctx.written;
  meta["results"] = ctx.results;
  meta["wall_time_seconds"] = std::chrono::duration<double>(t1 - t0).count();

  std::ofstream metaout(ctx.out_dir / "meta.json", std::ios::binary);
  if (!metaout) throw ValidationError("cannot write meta.json in " + cfg.out_dir);
  metaout << meta.dump(2) << '\n';

  if (!cfg.quiet) {
    std::fprintf(stdout, "%s: wrote %zu artifact(s) to %s\n", cfg.subcommand.c_str(),
                 ctx.written.size() + 1, cfg.out_dir.c_str());
  }
}

}  // namespace towpde
