#pragma once

#include <string>

#include "towpde/types.hpp"

namespace towpde {

enum class DomainKind { Interval, Box, Ball, Annulus };

struct ExteriorSphere {
  VecN center;
  double radius = 0.0;
};

// Bounded spatial domain with closed-form distance and exterior-sphere data.
// All supported kinds satisfy an exterior sphere condition at every boundary
// point, and all values are immutable after construction.
class DomainGeometry {
 public:
  static DomainGeometry interval(double a, double b);
  static DomainGeometry box(const VecN& lo, const VecN& hi);
  static DomainGeometry ball(const VecN& center, double radius);
  static DomainGeometry annulus(const VecN& center, double r_inner, double r_outer);

  DomainKind kind() const { return kind_; }
  int dim() const { return n_; }

  // Signed distance to the boundary: positive inside, negative outside.
  double signed_distance(const VecN& x) const;
  bool contains(const VecN& x) const { return signed_distance(x) > 0.0; }

  // Axis-aligned hull of the domain itself (without any strip padding).
  VecN bbox_lo() const { return bbox_lo_; }
  VecN bbox_hi() const { return bbox_hi_; }
  double diameter() const { return (bbox_hi_ - bbox_lo_).norm(); }

  // Enclosing ball: domain is contained in B_R(z).
  VecN enclosing_center() const { return enclosing_center_; }
  double enclosing_radius() const { return enclosing_radius_; }

  // A ball of maximal radius <= radius_hint that touches the boundary at y
  // from outside. y must lie on the boundary within 1e-12.
  ExteriorSphere exterior_sphere(const VecN& y, double radius_hint) const;

  // Nearest boundary point (used by the modulus scans).
  VecN project_to_boundary(const VecN& x) const;

  std::string describe() const;

  // Geometric parameters, exposed for serialization.
  VecN param_lo() const { return lo_; }
  VecN param_hi() const { return hi_; }
  VecN param_center() const { return center_; }
  double param_r_inner() const { return r_inner_; }
  double param_r_outer() const { return r_outer_; }

 private:
  DomainGeometry() = default;
  void finalize();

  DomainKind kind_ = DomainKind::Interval;
  int n_ = 1;
  VecN lo_, hi_;       // interval / box
  VecN center_;        // ball / annulus
  double r_inner_ = 0.0, r_outer_ = 0.0;
  VecN bbox_lo_, bbox_hi_;
  VecN enclosing_center_;
  double enclosing_radius_ = 0.0;
};

enum class RegionTag {
  InteriorCore,
  LateralStripI,
  OutsideStripO,
  ParabolicBoundary,
  Exterior,
};

const char* region_tag_name(RegionTag tag);

// Classify a space-time point against the parabolic strips around the
// cylinder domain x (0,T]:
//   - the inner strip is the boundary-adjacent part of the cylinder plus the
//     whole first time layer (0, eps^2/2),
//   - the outer strip is the eps-collar outside the closure for t in (0,T]
//     plus the padded domain for t <= 0,
//   - the parabolic boundary (initial slice and lateral surface) is tagged
//     separately and takes precedence over the outer strip.
RegionTag classify_region(const DomainGeometry& domain, const GameParams& params,
                          const SpaceTimePoint& point);

// Termination weight in [0,1]: 0 on the interior core, 1 on the outer strip
// and the parabolic boundary, and
//   1 - min{1, dist/eps} * min{1, sqrt(2t)/eps}
// on the inner strip. Continuous on the whole padded cylinder and equal to
// the time-independent weight for every t >= eps^2/2.
double delta_weight(const DomainGeometry& domain, const GameParams& params,
                    const SpaceTimePoint& point);

// Time-independent limit of delta_weight: 1 - dist/eps on the inner strip,
// 0 deep inside, 1 outside.
double delta_weight_elliptic(const DomainGeometry& domain, const GameParams& params,
                             const VecN& x);

}  // namespace towpde
