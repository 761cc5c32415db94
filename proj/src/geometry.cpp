#include "towpde/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace towpde {

namespace {
constexpr double kBoundaryTol = 1e-12;
}

GameParams GameParams::from_p(int n, double eps, double p, double T) {
  if (n < 1 || n > 3) throw ValidationError("GameParams: n must be 1, 2 or 3");
  if (!(eps > 0.0)) throw ValidationError("GameParams: eps must be positive");
  if (!(p > 1.0)) throw ValidationError("GameParams: p must exceed 1");
  if (!(T > 0.5 * eps * eps)) throw ValidationError("GameParams: need eps^2/2 < T");
  GameParams g;
  g.n = n;
  g.eps = eps;
  g.p = p;
  g.alpha = (p - 1.0) / (p + n);
  g.beta = (n + 1.0) / (p + n);
  g.T = T;
  return g;
}

GameParams GameParams::from_alpha(int n, double eps, double alpha, double T) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ValidationError("GameParams: alpha must lie in (0,1)");
  double p = (1.0 + n * alpha) / (1.0 - alpha);
  GameParams g = from_p(n, eps, p, T);
  g.alpha = alpha;  // keep the caller's exact value
  g.beta = 1.0 - alpha;
  return g;
}

DomainGeometry DomainGeometry::interval(double a, double b) {
  if (!(a < b)) throw ValidationError("interval: need a < b");
  DomainGeometry d;
  d.kind_ = DomainKind::Interval;
  d.n_ = 1;
  d.lo_ = VecN(a);
  d.hi_ = VecN(b);
  d.finalize();
  return d;
}

DomainGeometry DomainGeometry::box(const VecN& lo, const VecN& hi) {
  if (lo.n != hi.n || lo.n < 1 || lo.n > 3)
    throw ValidationError("box: corner dimensions must match and lie in 1..3");
  for (int i = 0; i < lo.n; ++i)
    if (!(lo[i] < hi[i])) throw ValidationError("box: need lo < hi per axis");
  DomainGeometry d;
  d.kind_ = DomainKind::Box;
  d.n_ = lo.n;
  d.lo_ = lo;
  d.hi_ = hi;
  d.finalize();
  return d;
}

DomainGeometry DomainGeometry::ball(const VecN& center, double radius) {
  if (center.n < 1 || center.n > 3) throw ValidationError("ball: n must be 1..3");
  if (!(radius > 0.0)) throw ValidationError("ball: radius must be positive");
  DomainGeometry d;
  d.kind_ = DomainKind::Ball;
  d.n_ = center.n;
  d.center_ = center;
  d.r_outer_ = radius;
  d.finalize();
  return d;
}

DomainGeometry DomainGeometry::annulus(const VecN& center, double r_inner, double r_outer) {
  if (center.n < 1 || center.n > 3) throw ValidationError("annulus: n must be 1..3");
  if (!(r_inner > 0.0 && r_outer > r_inner))
    throw ValidationError("annulus: need 0 < r_inner < r_outer");
  DomainGeometry d;
  d.kind_ = DomainKind::Annulus;
  d.n_ = center.n;
  d.center_ = center;
  d.r_inner_ = r_inner;
  d.r_outer_ = r_outer;
  d.finalize();
  return d;
}

void DomainGeometry::finalize() {
  switch (kind_) {
    case DomainKind::Interval:
    case DomainKind::Box:
      bbox_lo_ = lo_;
      bbox_hi_ = hi_;
      enclosing_center_ = (lo_ + hi_) * 0.5;
      enclosing_radius_ = 0.5 * (hi_ - lo_).norm();
      break;
    case DomainKind::Ball:
    case DomainKind::Annulus:
      bbox_lo_ = center_;
      bbox_hi_ = center_;
      for (int i = 0; i < n_; ++i) {
        bbox_lo_[i] -= r_outer_;
        bbox_hi_[i] += r_outer_;
      }
      enclosing_center_ = center_;
      enclosing_radius_ = r_outer_;
      break;
  }
}

double DomainGeometry::signed_distance(const VecN& x) const {
  if (x.n != n_) throw ValidationError("signed_distance: dimension mismatch");
  switch (kind_) {
    case DomainKind::Interval:
      return std::min(x[0] - lo_[0], hi_[0] - x[0]);
    case DomainKind::Box: {
      double inside = std::numeric_limits<double>::infinity();
      double out2 = 0.0;
      bool outside = false;
      for (int i = 0; i < n_; ++i) {
        double d = std::max(lo_[i] - x[i], x[i] - hi_[i]);  // >0 means outside on axis i
        if (d > 0.0) {
          outside = true;
          out2 += d * d;
        }
        inside = std::min(inside, std::min(x[i] - lo_[i], hi_[i] - x[i]));
      }
      return outside ? -std::sqrt(out2) : inside;
    }
    case DomainKind::Ball:
      return r_outer_ - (x - center_).norm();
    case DomainKind::Annulus: {
      double r = (x - center_).norm();
      return std::min(r - r_inner_, r_outer_ - r);
    }
  }
  return 0.0;
}

VecN DomainGeometry::project_to_boundary(const VecN& x) const {
  if (x.n != n_) throw ValidationError("project_to_boundary: dimension mismatch");
  switch (kind_) {
    case DomainKind::Interval:
      return VecN((x[0] - lo_[0] <= hi_[0] - x[0]) ? lo_[0] : hi_[0]);
    case DomainKind::Box: {
      if (signed_distance(x) <= 0.0) {
        VecN p = x;
        for (int i = 0; i < n_; ++i) p[i] = std::clamp(p[i], lo_[i], hi_[i]);
        // On a face already if x was outside; otherwise snap the closest axis.
        if (signed_distance(p) > 0.0) {
          int best = 0;
          double bestd = std::numeric_limits<double>::infinity();
          for (int i = 0; i < n_; ++i) {
            double dlo = p[i] - lo_[i], dhi = hi_[i] - p[i];
            if (std::min(dlo, dhi) < bestd) {
              bestd = std::min(dlo, dhi);
              best = i;
            }
          }
          double dlo = p[best] - lo_[best], dhi = hi_[best] - p[best];
          p[best] = (dlo <= dhi) ? lo_[best] : hi_[best];
        }
        return p;
      }
      VecN p = x;
      int best = 0;
      double bestd = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n_; ++i) {
        double dlo = p[i] - lo_[i], dhi = hi_[i] - p[i];
        if (std::min(dlo, dhi) < bestd) {
          bestd = std::min(dlo, dhi);
          best = i;
        }
      }
      double dlo = p[best] - lo_[best], dhi = hi_[best] - p[best];
      p[best] = (dlo <= dhi) ? lo_[best] : hi_[best];
      return p;
    }
    case DomainKind::Ball: {
      VecN u = x - center_;
      double r = u.norm();
      if (r == 0.0) return center_ + VecN::axis(n_, 0, r_outer_);
      return center_ + u * (r_outer_ / r);
    }
    case DomainKind::Annulus: {
      VecN u = x - center_;
      double r = u.norm();
      if (r == 0.0) return center_ + VecN::axis(n_, 0, r_inner_);
      double target = (r - r_inner_ <= r_outer_ - r) ? r_inner_ : r_outer_;
      return center_ + u * (target / r);
    }
  }
  return x;
}

ExteriorSphere DomainGeometry::exterior_sphere(const VecN& y, double radius_hint) const {
  if (y.n != n_) throw ValidationError("exterior_sphere: dimension mismatch");
  if (!(radius_hint > 0.0)) throw ValidationError("exterior_sphere: hint must be positive");
  if (std::abs(signed_distance(y)) > kBoundaryTol)
    throw ValidationError("exterior_sphere: point is not on the boundary");

  switch (kind_) {
    case DomainKind::Interval: {
      double mid = 0.5 * (lo_[0] + hi_[0]);
      double dir = (y[0] < mid) ? -1.0 : 1.0;
      return {VecN(y[0] + dir * radius_hint), radius_hint};
    }
    case DomainKind::Box: {
      // Outward direction: normalized sum of active face normals; the
      // touching ball stays inside the outward corner cone for any radius.
      VecN dir = VecN::zero(n_);
      for (int i = 0; i < n_; ++i) {
        if (std::abs(y[i] - lo_[i]) <= kBoundaryTol) dir[i] -= 1.0;
        if (std::abs(y[i] - hi_[i]) <= kBoundaryTol) dir[i] += 1.0;
      }
      double len = dir.norm();
      if (len == 0.0) throw ValidationError("exterior_sphere: point is not on the boundary");
      return {y + dir * (radius_hint / len), radius_hint};
    }
    case DomainKind::Ball: {
      VecN u = y - center_;
      double r = u.norm();
      VecN nu = u * (1.0 / r);
      return {y + nu * radius_hint, radius_hint};
    }
    case DomainKind::Annulus: {
      VecN u = y - center_;
      double r = u.norm();
      VecN nu = u * (1.0 / r);
      if (std::abs(r - r_outer_) <= std::abs(r - r_inner_))
        return {y + nu * radius_hint, radius_hint};
      // Inner boundary: the touching ball must fit inside the hole.
      double rad = std::min(radius_hint, r_inner_);
      return {y - nu * rad, rad};
    }
  }
  return {y, 0.0};
}

std::string DomainGeometry::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case DomainKind::Interval:
      os << "interval(" << lo_[0] << ", " << hi_[0] << ")";
      break;
    case DomainKind::Box:
      os << "box(n=" << n_ << ")";
      break;
    case DomainKind::Ball:
      os << "ball(r=" << r_outer_ << ")";
      break;
    case DomainKind::Annulus:
      os << "annulus(" << r_inner_ << ", " << r_outer_ << ")";
      break;
  }
  return os.str();
}

const char* region_tag_name(RegionTag tag) {
  switch (tag) {
    case RegionTag::InteriorCore: return "interior_core";
    case RegionTag::LateralStripI: return "lateral_strip_I";
    case RegionTag::OutsideStripO: return "outside_strip_O";
    case RegionTag::ParabolicBoundary: return "parabolic_boundary";
    case RegionTag::Exterior: return "exterior";
  }
  return "?";
}

RegionTag classify_region(const DomainGeometry& domain, const GameParams& params,
                          const SpaceTimePoint& point) {
  const double eps = params.eps;
  const double half_step = 0.5 * eps * eps;
  const double dist = domain.signed_distance(point.x);

  if (point.t > params.T || point.t <= -half_step) return RegionTag::Exterior;
  if (dist <= -eps) return RegionTag::Exterior;

  // Initial slice and lateral surface first; they also carry weight 1.
  if (point.t == 0.0 && dist >= 0.0) return RegionTag::ParabolicBoundary;
  if (dist == 0.0 && point.t > 0.0) return RegionTag::ParabolicBoundary;

  if (point.t <= 0.0) return RegionTag::OutsideStripO;  // padded pre-initial layer
  if (dist < 0.0) return RegionTag::OutsideStripO;      // eps-collar, t in (0,T]

  if (point.t < half_step) return RegionTag::LateralStripI;  // first time layer
  if (dist < eps) return RegionTag::LateralStripI;
  return RegionTag::InteriorCore;
}

double delta_weight(const DomainGeometry& domain, const GameParams& params,
                    const SpaceTimePoint& point) {
  RegionTag tag = classify_region(domain, params, point);
  switch (tag) {
    case RegionTag::Exterior:
      throw ValidationError("delta_weight: point lies outside the padded cylinder");
    case RegionTag::OutsideStripO:
    case RegionTag::ParabolicBoundary:
      return 1.0;
    case RegionTag::InteriorCore:
      return 0.0;
    case RegionTag::LateralStripI: {
      const double eps = params.eps;
      double space = std::min(1.0, domain.signed_distance(point.x) / eps);
      double time = std::min(1.0, std::sqrt(2.0 * point.t) / eps);
      return 1.0 - space * time;
    }
  }
  return 0.0;
}

double delta_weight_elliptic(const DomainGeometry& domain, const GameParams& params,
                             const VecN& x) {
  double dist = domain.signed_distance(x);
  if (dist <= 0.0) return 1.0;
  if (dist >= params.eps) return 0.0;
  return 1.0 - dist / params.eps;
}

}  // namespace towpde
