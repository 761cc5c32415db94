#include <doctest.h>

#include <cmath>

#include "towpde/quadrature.hpp"
#include "towpde/rng.hpp"

using namespace towpde;

namespace {

GameParams params2(double eps, double alpha) {
  return GameParams::from_alpha(2, eps, alpha, 1.0);
}

}  // namespace

TEST_CASE("direction sets have unit vectors and pinned small cases") {
  for (int n = 1; n <= 3; ++n) {
    DirectionSet d = DirectionSet::defaults(n);
    CHECK(d.n == n);
    for (const auto& v : d.vectors) CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
  }
  DirectionSet one = DirectionSet::defaults(1);
  REQUIRE(one.vectors.size() == 2);
  CHECK(one.vectors[0][0] == 1.0);
  CHECK(one.vectors[1][0] == -1.0);
  CHECK(DirectionSet::defaults(2).vectors.size() == 64);
  CHECK(DirectionSet::defaults(3).vectors.size() == 194);
}

TEST_CASE("rotation maps the reference axis onto nu orthonormally") {
  Xoshiro256pp rng(5, 0);
  for (int i = 0; i < 200; ++i) {
    double z = 2.0 * rng.uniform01() - 1.0;
    double phi = 6.283185307179586 * rng.uniform01();
    double r = std::sqrt(1.0 - z * z);
    VecN nu(r * std::cos(phi), r * std::sin(phi), z);
    VecN e1 = rotate_from_axis(nu, VecN(1.0, 0.0, 0.0));
    VecN e2 = rotate_from_axis(nu, VecN(0.0, 1.0, 0.0));
    VecN e3 = rotate_from_axis(nu, VecN(0.0, 0.0, 1.0));
    CHECK(std::abs(e1.norm() - 1.0) < 1e-12);
    CHECK(std::abs(e2.norm() - 1.0) < 1e-12);
    CHECK(std::abs(e1.dot(e2)) < 1e-12);
    CHECK(std::abs(e1.dot(nu)) < 1e-12);
    CHECK(std::abs(e2.dot(nu)) < 1e-12);
    CHECK((e3 - nu).norm() < 1e-12);
  }
}

TEST_CASE("ball rules are degree-4 exact") {
  {
    BallRule r2 = BallRule::make(2);
    double wsum = 0.0, m2 = 0.0, m4 = 0.0, m1 = 0.0, m3 = 0.0;
    for (std::size_t i = 0; i < r2.nodes.size(); ++i) {
      double h = r2.nodes[i][0], w = r2.weights[i];
      wsum += w;
      m1 += w * h;
      m2 += w * h * h;
      m3 += w * h * h * h;
      m4 += w * h * h * h * h;
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(m1) < 1e-15);
    CHECK(std::abs(m3) < 1e-15);
    CHECK(m2 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));  // segment average of h^2
    CHECK(m4 == doctest::Approx(1.0 / 5.0).epsilon(1e-14));
  }
  {
    BallRule r3 = BallRule::make(3);
    double wsum = 0.0, x2 = 0.0, r2 = 0.0, x4 = 0.0, x2y2 = 0.0, x1 = 0.0, x3 = 0.0;
    for (std::size_t i = 0; i < r3.nodes.size(); ++i) {
      double x = r3.nodes[i][0], y = r3.nodes[i][1], w = r3.weights[i];
      wsum += w;
      x1 += w * x;
      x2 += w * x * x;
      x3 += w * x * x * x;
      r2 += w * (x * x + y * y);
      x4 += w * x * x * x * x;
      x2y2 += w * x * x * y * y;
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(x1) < 1e-15);
    CHECK(std::abs(x3) < 1e-15);
    CHECK(x2 == doctest::Approx(0.25).epsilon(1e-14));   // disk average of x^2
    CHECK(r2 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(x4 == doctest::Approx(0.125).epsilon(1e-13));  // disk average of x^4
    CHECK(x2y2 == doctest::Approx(1.0 / 24.0).epsilon(1e-13));
  }
}

TEST_CASE("ball average pinned values") {
  BallRule rule = BallRule::make(2);
  // Constant slice.
  auto c = [](const VecN&) { return 2.5; };
  CHECK(ball_average(c, VecN(0.0, 0.0), VecN(0.0, 1.0), 0.3, rule) ==
        doctest::Approx(2.5).epsilon(1e-15));
  // Quadratic along the segment: average of h^2 over (-eps, eps) is eps^2/3.
  auto q = [](const VecN& y) { return y[0] * y[0]; };
  CHECK(ball_average(q, VecN(0.0, 0.0), VecN(0.0, 1.0), 0.3, rule) ==
        doctest::Approx(0.03).epsilon(1e-14));
  // Linear slices average to the center value.
  auto lin = [](const VecN& y) { return 1.0 + 2.0 * y[0] - 0.7 * y[1]; };
  Xoshiro256pp rng(9, 0);
  for (int i = 0; i < 50; ++i) {
    double phi = 6.283185307179586 * rng.uniform01();
    VecN nu(std::cos(phi), std::sin(phi));
    VecN x(rng.uniform01(), rng.uniform01());
    CHECK(ball_average(lin, x, nu, 0.2, rule) == doctest::Approx(lin(x)).epsilon(1e-13));
  }
}

TEST_CASE("one-step operator pinned values") {
  BallRule rule = BallRule::make(2);
  GameParams params = params2(0.3, 0.25);
  auto c = [](const VecN&) { return -1.25; };
  CHECK(a_epsilon(c, VecN(0.2, 0.1), VecN(1.0, 0.0), params, rule) ==
        doctest::Approx(-1.25).epsilon(1e-14));

  auto lin = [](const VecN& y) { return y[0]; };
  CHECK(a_epsilon(lin, VecN(0.0, 0.0), VecN(1.0, 0.0), params, rule) ==
        doctest::Approx(params.alpha * params.eps).epsilon(1e-14));

  auto sq = [](const VecN& y) { return y.dot(y); };
  CHECK(a_epsilon(sq, VecN(0.0, 0.0), VecN(0.6, 0.8), params, rule) ==
        doctest::Approx(0.045).epsilon(1e-14));  // alpha eps^2 + beta eps^2/3
}

TEST_CASE("one-step operator is continuous in the direction") {
  BallRule rule = BallRule::make(2);
  GameParams params = params2(0.1, 0.4);
  auto slice = [](const VecN& y) {
    return std::sin(2.0 * y[0]) + 0.5 * std::cos(y[1] - 0.3) + 0.2 * y[0] * y[1];
  };
  Xoshiro256pp rng(13, 0);
  for (int trial = 0; trial < 20; ++trial) {
    double phi = 6.283185307179586 * rng.uniform01();
    VecN x(0.4 * rng.uniform01(), 0.4 * rng.uniform01());
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double dphi : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
      VecN nu(std::cos(phi), std::sin(phi));
      VecN chi(std::cos(phi + dphi), std::sin(phi + dphi));
      double gap = std::abs(a_epsilon(slice, x, nu, params, rule) -
                            a_epsilon(slice, x, chi, params, rule));
      CHECK(gap <= prev_gap + 1e-14);
      prev_gap = gap;
    }
  }
}

TEST_CASE("midrange of linear slices recovers the center value and gradient direction") {
  BallRule rule = BallRule::make(2);
  GameParams params = params2(0.1, 0.3);
  DirectionSet dirs = DirectionSet::defaults(2);
  VecN a(0.6, -0.8);
  auto lin = [&a](const VecN& y) { return 0.4 + a.dot(y); };
  VecN x(0.25, 0.75);
  MidrangeResult r = midrange_over_directions(lin, x, params, dirs, rule);
  CHECK(r.value == doctest::Approx(lin(x)).epsilon(1e-10));
  VecN unit = a * (1.0 / a.norm());
  CHECK((r.nu_max - unit).norm() < 2e-4);        // theta_tol scale
  CHECK((r.nu_min + unit).norm() < 2e-4);
}

TEST_CASE("midrange ties break to the first direction") {
  BallRule rule = BallRule::make(2);
  GameParams params = params2(0.1, 0.3);
  DirectionSet dirs = DirectionSet::make(2, 16, Refinement::None, 1e-4);
  auto c = [](const VecN&) { return 3.0; };
  MidrangeResult r = midrange_over_directions(c, VecN(0.0, 0.0), params, dirs, rule);
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-14));
  CHECK((r.nu_max - dirs.vectors[0]).norm() == 0.0);
  CHECK((r.nu_min - dirs.vectors[0]).norm() == 0.0);

  // Radially symmetric slice: every direction optimal, value pinned.
  auto sq = [](const VecN& y) { return y.dot(y); };
  MidrangeResult s = midrange_over_directions(sq, VecN(0.0, 0.0), params, dirs, rule);
  double expect = params.alpha * 0.01 + params.beta * 0.01 / 3.0;
  CHECK(s.value == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("midrange is monotone and translation equivariant") {
  BallRule rule = BallRule::make(2);
  GameParams params = params2(0.15, 0.5);
  DirectionSet dirs = DirectionSet::make(2, 32, Refinement::LocalBracket, 1e-4);
  Xoshiro256pp rng(21, 0);
  for (int trial = 0; trial < 25; ++trial) {
    double a1 = rng.uniform01(), a2 = rng.uniform01(), b = rng.uniform01();
    auto u = [&](const VecN& y) { return std::sin(a1 * y[0]) + a2 * y[1] * y[1]; };
    auto v = [&](const VecN& y) { return u(y) + 0.3 + 0.2 * b * std::cos(y[0]); };  // v >= u
    VecN x(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
    MidrangeResult mu = midrange_over_directions(u, x, params, dirs, rule);
    MidrangeResult mv = midrange_over_directions(v, x, params, dirs, rule);
    CHECK(mu.value <= mv.value + 1e-14);

    const double c = 2.375;
    auto shifted = [&](const VecN& y) { return u(y) + c; };
    MidrangeResult ms = midrange_over_directions(shifted, x, params, dirs, rule);
    CHECK(ms.value == doctest::Approx(mu.value + c).epsilon(1e-12));
    CHECK((ms.nu_max - mu.nu_max).norm() < 1e-9);
    CHECK((ms.nu_min - mu.nu_min).norm() < 1e-9);
  }
}

TEST_CASE("local bracket refinement never worsens the scan") {
  BallRule rule = BallRule::make(2);
  GameParams params = params2(0.1, 0.35);
  DirectionSet coarse = DirectionSet::make(2, 24, Refinement::None, 1e-4);
  DirectionSet refined = DirectionSet::make(2, 24, Refinement::LocalBracket, 1e-4);
  Xoshiro256pp rng(31, 0);
  for (int trial = 0; trial < 30; ++trial) {
    double a = 2.0 * rng.uniform01() - 1.0, b = 2.0 * rng.uniform01() - 1.0;
    auto u = [&](const VecN& y) { return std::sin(3.0 * a * y[0] + b) + b * y[1]; };
    VecN x(0.3 * rng.uniform01(), 0.3 * rng.uniform01());
    MidrangeResult mc = midrange_over_directions(u, x, params, coarse, rule);
    MidrangeResult mr = midrange_over_directions(u, x, params, refined, rule);
    CHECK(mr.max_value >= mc.max_value - 1e-15);
    CHECK(mr.min_value <= mc.min_value + 1e-15);
  }
}

TEST_CASE("3-d refinement improves toward the analytic optimum") {
  BallRule rule = BallRule::make(3);
  GameParams params = GameParams::from_alpha(3, 0.1, 0.4, 1.0);
  DirectionSet dirs = DirectionSet::defaults(3);
  VecN a(0.48, -0.6, 0.64);
  auto lin = [&a](const VecN& y) { return a.dot(y); };
  VecN x(0.0, 0.0, 0.0);
  MidrangeResult r = midrange_over_directions(lin, x, params, dirs, rule);
  VecN unit = a * (1.0 / a.norm());
  CHECK(std::abs(r.value) < 1e-10);
  CHECK((r.nu_max - unit).norm() < 5e-3);
  CHECK((r.nu_min + unit).norm() < 5e-3);
  // Optimal value alpha*eps*|a| reached within the bracket tolerance.
  CHECK(r.max_value == doctest::Approx(params.alpha * params.eps * a.norm()).epsilon(1e-6));
}

TEST_CASE("n=1 one-step convention") {
  BallRule rule = BallRule::make(1);
  GameParams params = GameParams::from_p(1, 0.2, 2.0, 1.0);
  auto u = [](const VecN& y) { return y[0] * y[0] + 1.0; };
  VecN x(0.5);
  double expect = params.alpha * u(VecN(0.7)) + params.beta * u(x);
  CHECK(a_epsilon(u, x, VecN(1.0), params, rule) == doctest::Approx(expect).epsilon(1e-15));
}
