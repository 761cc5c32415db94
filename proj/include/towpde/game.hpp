#pragma once

#include <functional>
#include <span>
#include <vector>

#include "towpde/dpp.hpp"
#include "towpde/geometry.hpp"
#include "towpde/grid.hpp"
#include "towpde/rng.hpp"

namespace towpde {

// One observed game state: c == 1 marks the terminal coin.
struct GameState {
  int c = 0;
  SpaceTimePoint Z;
};

// Full record of one play-through. states holds indices 0 .. tau+1, where the
// terminal entry repeats the stopped position with c = 1; payoff is the
// boundary payoff at the stopped state.
struct GameTrajectory {
  std::vector<GameState> states;
  std::size_t tau = 0;
  double payoff = 0.0;
};

// Deterministic feedback map from the game history to a unit direction.
using Strategy = std::function<VecN(std::span<const GameState>)>;

enum class Player { I, II };

// Simulate one game from z0 using the given strategies and one RNG stream.
// Per-step draw order is fixed: termination, winner coin, move-vs-noise coin,
// then the noise coordinates (only when the noise branch fires).
GameTrajectory play_game(const SpaceTimePoint& z0, const Strategy& s1, const Strategy& s2,
                         const GameParams& params, const DomainGeometry& domain,
                         const BoundaryData& F, Xoshiro256pp rng);

struct ValueEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

// Monte Carlo estimate of the expected payoff over `samples` independent
// trajectories (streams derived from the spec by trajectory index, so the
// result is independent of thread count).
ValueEstimate estimate_value(const SpaceTimePoint& z0, const Strategy& s1,
                             const Strategy& s2, const GameParams& params,
                             const DomainGeometry& domain, const BoundaryData& F,
                             std::size_t samples, const RngSpec& rng, int threads = 0);

// Collect whole trajectories (for diagnostics).
std::vector<GameTrajectory> simulate_trajectories(const SpaceTimePoint& z0,
                                                  const Strategy& s1, const Strategy& s2,
                                                  const GameParams& params,
                                                  const DomainGeometry& domain,
                                                  const BoundaryData& F,
                                                  std::size_t count, const RngSpec& rng,
                                                  int threads = 0);

// Strategy optimizing the one-step operator on a solved grid: player I takes
// the maximizing direction, player II the minimizing one; ties fall to the
// lowest index of the scan set.
Strategy greedy_strategy(const GridFunction& u, Player player, const DirectionSet& dirs);

// Pull toward z (player-I orientation, -(x-z)/|x-z|); callers negate the
// output for the push variant. At x == z the first basis vector is returned.
Strategy pull_strategy(const VecN& z);

// Arbitrary-but-deterministic direction from a hash of (seed, step, x); used
// as the "uncooperative opponent" in diagnostics.
Strategy hashed_direction_strategy(uint64_t seed, int n);

// Expected exit step count of the radial annulus game: player I pulls toward
// z, player II pushes away clamped at the enclosing sphere of radius R, noise
// is uniform on the orthogonal disk intersected with the enclosing ball.
// Returns the Monte Carlo mean and standard error of tau*.
ValueEstimate annulus_exit_time(const VecN& x0, const VecN& z, double delta_ext, double R,
                                const GameParams& params, std::size_t samples,
                                const RngSpec& rng, int threads = 0);

struct StepDrift {
  std::size_t step = 0;
  std::size_t count = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double ci_lo = 0.0;  // 99% normal interval
  double ci_hi = 0.0;
  bool flagged = false;  // interval strictly above zero
};

struct MartingaleReport {
  std::vector<StepDrift> steps;
  bool any_flagged = false;
};

// Per-step drift estimates of phi along recorded trajectories; flags steps
// whose 99% confidence interval lies strictly above zero. phi sees the step
// index so that time-compensated test functions are expressible.
using StepFunction = std::function<double(std::size_t step, int c, const SpaceTimePoint&)>;
MartingaleReport martingale_diagnostic(std::span<const GameTrajectory> trajectories,
                                       const StepFunction& phi);

}  // namespace towpde
