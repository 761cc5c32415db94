#include "towpde/grid.hpp"

#include <cmath>
#include <sstream>

#include "towpde/rng.hpp"

namespace towpde {

Lattice Lattice::cover(const DomainGeometry& domain, double eps, double h) {
  if (!(h > 0.0)) throw ValidationError("Lattice: spacing must be positive");
  Lattice lat;
  lat.n = domain.dim();
  lat.h = h;
  VecN lo = domain.bbox_lo(), hi = domain.bbox_hi();
  for (int a = 0; a < lat.n; ++a) {
    lat.origin[a] = lo[a] - eps - 2.0 * h;
    double span = (hi[a] + eps + 2.0 * h) - lat.origin[a];
    lat.counts[static_cast<size_t>(a)] = static_cast<int>(std::ceil(span / h - 1e-9)) + 1;
  }
  return lat;
}

double Lattice::interpolate(const std::vector<double>& values, const VecN& x) const {
  int idx[3] = {0, 0, 0};
  double w[3] = {0.0, 0.0, 0.0};
  const double snap = 1e-9;
  for (int a = 0; a < n; ++a) {
    double s = (x[a] - origin[a]) / h;
    int cells = counts[static_cast<size_t>(a)] - 1;
    if (s < 0.0 || s > static_cast<double>(cells)) {
      if (s > -snap && s < 0.0) {
        s = 0.0;
      } else if (s < cells + snap && s > static_cast<double>(cells)) {
        s = static_cast<double>(cells);
      } else {
        std::ostringstream os;
        os << "interpolate: query outside lattice hull at (";
        for (int b = 0; b < n; ++b) os << (b ? ", " : "") << x[b];
        os << ")";
        throw NumericalError(os.str());
      }
    }
    int i = static_cast<int>(s);
    if (i >= cells) i = cells - 1;  // right edge lands in the last cell
    idx[a] = i;
    w[a] = s - static_cast<double>(i);
  }

  // Accumulate corner contributions with non-negative weights; this form is
  // monotone in the nodal values under rounding.
  double acc = 0.0;
  int corners = 1 << n;
  std::size_t stride[3] = {1, 1, 1};
  for (int a = n - 2; a >= 0; --a)
    stride[a] = stride[a + 1] * static_cast<std::size_t>(counts[static_cast<size_t>(a + 1)]);
  for (int c = 0; c < corners; ++c) {
    double weight = 1.0;
    std::size_t flat = 0;
    for (int a = 0; a < n; ++a) {
      int bit = (c >> a) & 1;
      weight *= bit ? w[a] : (1.0 - w[a]);
      flat += static_cast<std::size_t>(idx[a] + bit) * stride[a];
    }
    if (weight != 0.0) acc += weight * values[flat];
  }
  return acc;
}

int GridFunction::level_of_time(double t) const {
  double dt = params_.time_step();
  double k = t / dt;
  double rounded = std::round(k);
  if (std::abs(k - rounded) > 1e-6)
    throw ValidationError("GridFunction: time is not aligned with the level grid");
  int ki = static_cast<int>(rounded);
  if (ki < 0 || ki >= level_count())
    throw ValidationError("GridFunction: time level out of range");
  return ki;
}

double measured_boundary_lipschitz(const BoundaryData& data, const DomainGeometry& domain,
                                   const GameParams& params, int samples, uint64_t seed) {
  Xoshiro256pp rng(seed, 0);
  const VecN lo = domain.bbox_lo(), hi = domain.bbox_hi();
  auto sample_strip_point = [&]() {
    // Rejection-sample a point of the boundary strips (space or time strip).
    for (int attempt = 0; attempt < 1000; ++attempt) {
      VecN x = VecN::zero(domain.dim());
      for (int a = 0; a < domain.dim(); ++a) {
        double pad = params.eps;
        x[a] = lo[a] - pad + (hi[a] - lo[a] + 2 * pad) * rng.uniform01();
      }
      double t = params.T * rng.uniform01();
      double dist = domain.signed_distance(x);
      if (dist <= -params.eps) continue;
      if (std::abs(dist) < params.eps || t < 0.5 * params.eps * params.eps)
        return SpaceTimePoint{x, t};
    }
    return SpaceTimePoint{domain.project_to_boundary(lo), 0.5 * params.T};
  };

  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    SpaceTimePoint a = sample_strip_point();
    SpaceTimePoint b = sample_strip_point();
    double d = parabolic_distance(a, b);
    if (d < 1e-12) continue;
    worst = std::max(worst, std::abs(data.F(a) - data.F(b)) / d);
  }
  return worst;
}

}  // namespace towpde
