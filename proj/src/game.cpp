#include "towpde/game.hpp"

#include <cmath>
#include <cstring>

#include "towpde/parallel.hpp"

namespace towpde {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void check_unit(const VecN& nu) {
  if (std::abs(nu.norm() - 1.0) > 1e-9)
    throw ValidationError("strategy returned a non-unit vector");
}

// Uniform point of the (n-1)-disk of radius eps orthogonal to nu, centered
// at x. Consumes 1 draw in 2-d, 2 draws in 3-d, none in 1-d.
VecN draw_noise(const VecN& x, const VecN& nu, double eps, Xoshiro256pp& rng) {
  switch (x.n) {
    case 1:
      return x;  // the 0-disk is the single point {0}
    case 2: {
      double s = eps * (2.0 * rng.uniform01() - 1.0);
      return x + rotate_from_axis(nu, VecN(1.0, 0.0)) * s;
    }
    default: {
      double r = eps * std::sqrt(rng.uniform01());
      double phi = 2.0 * kPi * rng.uniform01();
      VecN h(r * std::cos(phi), r * std::sin(phi), 0.0);
      return x + rotate_from_axis(nu, h);
    }
  }
}

// Uniform point of the eps-disk orthogonal to the radial direction clipped to
// the enclosing ball B_R(z). The disk is orthogonal to x - z, so the clipped
// region is the concentric sub-disk of radius sqrt(R^2 - r^2); sampling it
// directly keeps the draw count fixed.
VecN draw_clamped_noise(const VecN& x, const VecN& z, const VecN& radial, double r,
                        double R, double eps, Xoshiro256pp& rng) {
  (void)z;
  double cap = std::min(eps, std::sqrt(std::max(0.0, R * R - r * r)));
  switch (x.n) {
    case 1:
      return x;
    case 2: {
      double s = cap * (2.0 * rng.uniform01() - 1.0);
      return x + rotate_from_axis(radial, VecN(1.0, 0.0)) * s;
    }
    default: {
      double rr = cap * std::sqrt(rng.uniform01());
      double phi = 2.0 * kPi * rng.uniform01();
      VecN h(rr * std::cos(phi), rr * std::sin(phi), 0.0);
      return x + rotate_from_axis(radial, h);
    }
  }
}

template <class OnState>
double run_game(const SpaceTimePoint& z0, const Strategy& s1, const Strategy& s2,
                const GameParams& params, const DomainGeometry& domain,
                const BoundaryData& F, Xoshiro256pp& rng, std::vector<GameState>& history,
                std::size_t& tau, const OnState& on_state) {
  if (!z0.x.finite() || z0.x.n != params.n)
    throw ValidationError("play_game: bad start point");
  const double dt = params.time_step();

  history.clear();
  history.push_back(GameState{0, z0});
  on_state(history.back());

  for (std::size_t j = 0;; ++j) {
    const GameState& cur = history.back();
    double delta = delta_from_distance(domain.signed_distance(cur.Z.x), cur.Z.t, params.eps);

    bool stop;
    if (delta >= 1.0) {
      stop = true;  // certain termination; no draw so the step bound is exact
    } else {
      stop = rng.uniform01() > 1.0 - delta;
    }
    if (stop) {
      tau = j;
      history.push_back(GameState{1, cur.Z});
      on_state(history.back());
      return F(cur.Z.x, cur.Z.t);
    }

    std::span<const GameState> past(history.data(), history.size());
    VecN nu1 = s1(past);
    VecN nu2 = s2(past);
    check_unit(nu1);
    check_unit(nu2);

    const VecN& nu = (rng.uniform01() < 0.5) ? nu1 : nu2;
    VecN next_x;
    if (rng.uniform01() < params.alpha) {
      next_x = cur.Z.x + nu * params.eps;
    } else {
      next_x = draw_noise(cur.Z.x, nu, params.eps, rng);
    }
    history.push_back(GameState{0, SpaceTimePoint{next_x, cur.Z.t - dt}});
    on_state(history.back());
  }
}

double normal_q995() { return 2.5758293035489004; }

}  // namespace

GameTrajectory play_game(const SpaceTimePoint& z0, const Strategy& s1, const Strategy& s2,
                         const GameParams& params, const DomainGeometry& domain,
                         const BoundaryData& F, Xoshiro256pp rng) {
  GameTrajectory traj;
  traj.payoff = run_game(z0, s1, s2, params, domain, F, rng, traj.states, traj.tau,
                         [](const GameState&) {});
  return traj;
}

ValueEstimate estimate_value(const SpaceTimePoint& z0, const Strategy& s1,
                             const Strategy& s2, const GameParams& params,
                             const DomainGeometry& domain, const BoundaryData& F,
                             std::size_t samples, const RngSpec& rng, int threads) {
  if (samples < 2) throw ValidationError("estimate_value: M >= 2 required");
  std::vector<double> payoffs(samples);
  parallel_for(samples, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<GameState> scratch;
    for (std::size_t i = begin; i < end; ++i) {
      Xoshiro256pp stream = rng.stream(i);
      std::size_t tau = 0;
      payoffs[i] = run_game(z0, s1, s2, params, domain, F, stream, scratch, tau,
                            [](const GameState&) {});
    }
  });
  ValueEstimate est;
  est.samples = samples;
  est.mean = pairwise_sum(payoffs) / static_cast<double>(samples);
  std::vector<double> sq(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    double d = payoffs[i] - est.mean;
    sq[i] = d * d;
  }
  double var = pairwise_sum(sq) / static_cast<double>(samples - 1);
  est.stderr_ = std::sqrt(var / static_cast<double>(samples));
  return est;
}

std::vector<GameTrajectory> simulate_trajectories(const SpaceTimePoint& z0,
                                                  const Strategy& s1, const Strategy& s2,
                                                  const GameParams& params,
                                                  const DomainGeometry& domain,
                                                  const BoundaryData& F,
                                                  std::size_t count, const RngSpec& rng,
                                                  int threads) {
  std::vector<GameTrajectory> out(count);
  parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = play_game(z0, s1, s2, params, domain, F, rng.stream(i));
    }
  });
  return out;
}

Strategy greedy_strategy(const GridFunction& u, Player player, const DirectionSet& dirs) {
  const BallRule rule = BallRule::make(u.params().n);
  const GridFunction* grid = &u;
  bool maximize = (player == Player::I);
  return [grid, dirs, rule, maximize](std::span<const GameState> history) {
    const GameState& cur = history.back();
    int level = grid->level_of_time(cur.Z.t);
    if (level < 1)
      throw ValidationError("greedy_strategy: token time below the first level");
    LevelSlice slice{grid, level - 1};
    VecN arg;
    double val;
    best_direction(slice, cur.Z.x, grid->params(), dirs, rule, maximize, arg, val);
    return arg;
  };
}

Strategy pull_strategy(const VecN& z) {
  return [z](std::span<const GameState> history) {
    const VecN& x = history.back().Z.x;
    VecN d = x - z;
    double len = d.norm();
    if (len == 0.0) return VecN::axis(x.n, 0);
    return d * (-1.0 / len);
  };
}

Strategy hashed_direction_strategy(uint64_t seed, int n) {
  return [seed, n](std::span<const GameState> history) {
    uint64_t state = seed ^ (0xA24BAED4963EE407ULL * (history.size() + 1));
    for (int a = 0; a < n; ++a) {
      uint64_t bits;
      double coord = history.back().Z.x[a];
      static_assert(sizeof(bits) == sizeof(coord));
      std::memcpy(&bits, &coord, sizeof(bits));
      state ^= splitmix64(bits += state);
    }
    double u1 = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    double u2 = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    switch (n) {
      case 1:
        return VecN(u1 < 0.5 ? -1.0 : 1.0);
      case 2: {
        double phi = 2.0 * kPi * u1;
        return VecN(std::cos(phi), std::sin(phi));
      }
      default: {
        double zc = 2.0 * u1 - 1.0;
        double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
        double phi = 2.0 * kPi * u2;
        return VecN(r * std::cos(phi), r * std::sin(phi), zc);
      }
    }
  };
}

ValueEstimate annulus_exit_time(const VecN& x0, const VecN& z, double delta_ext, double R,
                                const GameParams& params, std::size_t samples,
                                const RngSpec& rng, int threads) {
  if (x0.n != z.n || x0.n != params.n)
    throw ValidationError("annulus_exit_time: dimension mismatch");
  if (!(delta_ext > 0.0 && delta_ext < R))
    throw ValidationError("annulus_exit_time: need 0 < delta_ext < R");
  double r0 = (x0 - z).norm();
  if (r0 > R || r0 < delta_ext)
    throw ValidationError("annulus_exit_time: start point outside the annulus");
  if (samples < 2) throw ValidationError("annulus_exit_time: M >= 2 required");

  const double eps = params.eps;
  const std::size_t step_cap = 100000000;

  std::vector<double> taus(samples);
  parallel_for(samples, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Xoshiro256pp stream = rng.stream(i);
      VecN x = x0;
      std::size_t k = 0;
      while ((x - z).norm() > delta_ext) {
        if (++k > step_cap)
          throw NumericalError("annulus_exit_time: step cap exceeded");
        VecN u = x - z;
        double r = u.norm();
        VecN radial = u * (1.0 / r);
        if (stream.uniform01() < 0.5) {
          // Player I pulls toward z.
          if (stream.uniform01() < params.alpha) {
            x = x - radial * eps;
          } else {
            x = draw_clamped_noise(x, z, radial, r, R, eps, stream);
          }
        } else {
          // Player II pushes away, clamped onto the enclosing sphere.
          if (stream.uniform01() < params.alpha) {
            x = x + radial * std::min(eps, R - r);
          } else {
            x = draw_clamped_noise(x, z, radial, r, R, eps, stream);
          }
        }
      }
      taus[i] = static_cast<double>(k);
    }
  });

  ValueEstimate est;
  est.samples = samples;
  est.mean = pairwise_sum(taus) / static_cast<double>(samples);
  std::vector<double> sq(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    double d = taus[i] - est.mean;
    sq[i] = d * d;
  }
  est.stderr_ = std::sqrt(pairwise_sum(sq) / static_cast<double>(samples - 1) /
                          static_cast<double>(samples));
  return est;
}

MartingaleReport martingale_diagnostic(std::span<const GameTrajectory> trajectories,
                                       const StepFunction& phi) {
  if (trajectories.size() < 100)
    throw ValidationError("martingale_diagnostic: need at least 100 trajectories");
  std::size_t max_steps = 0;
  for (const auto& t : trajectories)
    max_steps = std::max(max_steps, t.states.size() > 0 ? t.states.size() - 1 : 0);

  MartingaleReport report;
  report.steps.reserve(max_steps);
  std::vector<double> increments;
  for (std::size_t k = 0; k < max_steps; ++k) {
    increments.clear();
    for (const auto& t : trajectories) {
      if (t.states.size() > k + 1) {
        double a = phi(k, t.states[k].c, t.states[k].Z);
        double b = phi(k + 1, t.states[k + 1].c, t.states[k + 1].Z);
        increments.push_back(b - a);
      }
    }
    if (increments.empty()) continue;
    StepDrift d;
    d.step = k;
    d.count = increments.size();
    d.mean = pairwise_sum(increments) / static_cast<double>(increments.size());
    if (increments.size() >= 2) {
      double ss = 0.0;
      for (double v : increments) ss += (v - d.mean) * (v - d.mean);
      double var = ss / static_cast<double>(increments.size() - 1);
      d.stderr_ = std::sqrt(var / static_cast<double>(increments.size()));
    }
    double half = normal_q995() * d.stderr_;
    d.ci_lo = d.mean - half;
    d.ci_hi = d.mean + half;
    d.flagged = d.ci_lo > 0.0;
    report.any_flagged = report.any_flagged || d.flagged;
    report.steps.push_back(d);
  }
  return report;
}

}  // namespace towpde
