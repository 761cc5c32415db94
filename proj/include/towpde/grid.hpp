#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "towpde/geometry.hpp"
#include "towpde/types.hpp"

namespace towpde {

// Uniform axis-aligned lattice whose hull covers the eps-padded domain with a
// two-cell safety margin, so every one-step sample from inside the domain
// interpolates without extrapolation. Interpolation is multilinear and exact
// for affine functions.
struct Lattice {
  int n = 1;
  double h = 0.0;
  VecN origin;
  std::array<int, 3> counts{1, 1, 1};

  static Lattice cover(const DomainGeometry& domain, double eps, double h);

  std::size_t node_count() const {
    return static_cast<std::size_t>(counts[0]) * counts[1] * counts[2];
  }
  VecN position(std::size_t flat) const {
    VecN x = VecN::zero(n);
    auto rest = flat;
    for (int a = n - 1; a >= 0; --a) {
      auto c = static_cast<std::size_t>(counts[static_cast<size_t>(a)]);
      x[a] = origin[a] + static_cast<double>(rest % c) * h;
      rest /= c;
    }
    return x;
  }

  // Multilinear interpolation of nodal values at x. Queries outside the hull
  // beyond a tiny snapping tolerance raise NumericalError naming the point.
  double interpolate(const std::vector<double>& values, const VecN& x) const;
};

// Values on the lattice at time levels t_k = k * eps^2/2.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Lattice lattice, GameParams params, int levels)
      : lattice_(std::move(lattice)),
        params_(params),
        levels_(static_cast<std::size_t>(levels),
                std::vector<double>(lattice_.node_count(), 0.0)) {}

  const Lattice& lattice() const { return lattice_; }
  const GameParams& params() const { return params_; }
  int level_count() const { return static_cast<int>(levels_.size()); }
  int last_level() const { return level_count() - 1; }
  double level_time(int k) const { return static_cast<double>(k) * params_.time_step(); }

  std::vector<double>& level(int k) { return levels_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& level(int k) const { return levels_[static_cast<std::size_t>(k)]; }

  double interpolate(int k, const VecN& x) const {
    return lattice_.interpolate(level(k), x);
  }
  // Level index of a grid-aligned time; rejects off-grid queries.
  int level_of_time(double t) const;

 private:
  Lattice lattice_;
  GameParams params_;
  std::vector<std::vector<double>> levels_;
};

// View of one time level as a spatial callable.
struct LevelSlice {
  const GridFunction* grid = nullptr;
  int level = 0;
  double operator()(const VecN& x) const { return grid->interpolate(level, x); }
};

// View of a plain nodal vector on a lattice.
struct FieldSlice {
  const Lattice* lattice = nullptr;
  const std::vector<double>* values = nullptr;
  double operator()(const VecN& x) const { return lattice->interpolate(*values, x); }
};

// Boundary/terminal payoff. The callable must accept every point of the
// padded boundary region (and the lattice margin just beyond it); built-in
// payoffs are global formulas, so this costs nothing.
struct BoundaryData {
  std::function<double(const SpaceTimePoint&)> F;
  std::optional<double> lipschitz;

  double operator()(const VecN& x, double t) const { return F(SpaceTimePoint{x, t}); }
};

// Spot-check of the parabolic Lipschitz bound |F(a)-F(b)| <= L * d(a,b) over
// sampled point pairs in the boundary strips; returns the worst quotient.
double measured_boundary_lipschitz(const BoundaryData& data, const DomainGeometry& domain,
                                   const GameParams& params, int samples, uint64_t seed);

}  // namespace towpde
