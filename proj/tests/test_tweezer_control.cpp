#include <doctest/doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "aaphase/control.hpp"
#include "aaphase/tweezer.hpp"

using aa::ControlSignal;
using aa::FieldSet;
using aa::TweezerField;
using Eigen::Matrix2Xd;
using Eigen::Vector2d;

TEST_SUITE("tweezer_control") {

TEST_CASE("gaussian trap potential and derivatives") {
  TweezerField f;
  f.depth = 1309.2;
  f.sigma = 2.0;
  const Vector2d c(1.0, -2.0);
  CHECK(f.potential(c, c) == doctest::Approx(-f.depth).epsilon(1e-15));

  // Numeric consistency of gradient and hessian.
  const Vector2d r(2.1, -1.2);
  const double eps = 1e-6;
  const Vector2d g = f.gradient(r, c);
  const Eigen::Matrix2d h = f.hessian(r, c);
  for (int a = 0; a < 2; ++a) {
    Vector2d d = Vector2d::Zero();
    d[a] = eps;
    const double fd = (f.potential(r + d, c) - f.potential(r - d, c)) / (2 * eps);
    CHECK(g[a] == doctest::Approx(fd).epsilon(1e-7));
    const Vector2d fdg = (f.gradient(r + d, c) - f.gradient(r - d, c)) / (2 * eps);
    CHECK((h.col(a) - fdg).norm() < 1e-6 * (1.0 + h.norm()));
  }

  // Curvature at the bottom: 2 D / sigma^2 on both axes.
  const Eigen::Matrix2d hb = f.hessian(c, c);
  const double k = 2.0 * f.depth / (f.sigma * f.sigma);
  CHECK(hb(0, 0) == doctest::Approx(k).epsilon(1e-12));
  CHECK(hb(1, 1) == doctest::Approx(k).epsilon(1e-12));
  CHECK(std::abs(hb(0, 1)) < 1e-12 * k);
}

TEST_CASE("force peaks at sigma over sqrt 2") {
  TweezerField f;
  f.depth = 1309.2033912698901;  // 10 mK
  f.sigma = 2.0;
  const Vector2d c(0, 0);
  const double rpk = f.sigma / std::sqrt(2.0);
  const double fpk = f.gradient(Vector2d(rpk, 0), c).norm();
  CHECK(fpk == doctest::Approx(std::sqrt(2.0) * f.depth / f.sigma *
                               std::exp(-0.5)).epsilon(1e-12));
  // Just off the peak the force is smaller on both sides.
  CHECK(f.gradient(Vector2d(rpk * 0.9, 0), c).norm() < fpk);
  CHECK(f.gradient(Vector2d(rpk * 1.1, 0), c).norm() < fpk);
}

TEST_CASE("field set sums traps and routes the mobile one") {
  TweezerField stat;
  stat.depth = 500.0;
  stat.sigma = 2.0;
  stat.center = Vector2d(0, 0);
  TweezerField mob;
  mob.depth = 1300.0;
  mob.sigma = 2.0;
  mob.mobile = true;
  FieldSet set({stat, mob});
  REQUIRE(set.has_mobile());

  const Vector2d r(0.4, 0.6), u(0.2, 19.0);
  const double direct = stat.potential(r, stat.center) + mob.potential(r, u);
  CHECK(set.potential(r, u) == doctest::Approx(direct).epsilon(1e-15));
  const Vector2d g =
      stat.gradient(r, stat.center) + mob.gradient(r, u);
  CHECK((set.gradient(r, u) - g).norm() < 1e-14 * (1.0 + g.norm()));

  // Mixed derivative: only the mobile trap depends on u, through r - u.
  const Eigen::Matrix2d mixed = set.mixed_hessian(r, u);
  CHECK((mixed + mob.hessian(r, u)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spline interpolates knots and differentiates consistently") {
  const int n = 12;
  const double T = 6.0;
  Matrix2Xd s(2, n + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = T * k / n;
    s(0, k) = std::sin(1.1 * t) + 0.3 * t;
    s(1, k) = std::cos(0.7 * t);
  }
  ControlSignal u(T, s);
  CHECK(u.intervals() == n);
  CHECK(u.knot_spacing() == doctest::Approx(T / n));
  for (int k = 0; k <= n; ++k)
    CHECK((u.value(T * k / n) - s.col(k)).norm() < 1e-12);

  // velocity and acceleration are the derivatives of value.
  const double eps = 1e-6;
  for (double t : {0.37, 1.91, 4.44, 5.2}) {
    const Vector2d v = (u.value(t + eps) - u.value(t - eps)) / (2 * eps);
    CHECK((u.velocity(t) - v).norm() < 1e-6);
    const Vector2d a = (u.velocity(t + eps) - u.velocity(t - eps)) / (2 * eps);
    CHECK((u.acceleration(t) - a).norm() < 1e-5);
  }

  // Natural boundary: zero curvature at both ends.
  CHECK(u.acceleration(0.0).norm() < 1e-10);
  CHECK(u.acceleration(T).norm() < 1e-10);
}

TEST_CASE("spline reproduces straight lines exactly") {
  const int n = 7;
  const double T = 3.5;
  Matrix2Xd s(2, n + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = T * k / n;
    s.col(k) = Vector2d(2.0 - 0.5 * t, 1.0 + 2.0 * t);
  }
  ControlSignal u(T, s);
  for (double t : {0.1, 1.0, 2.6, 3.3}) {
    CHECK((u.value(t) - Vector2d(2.0 - 0.5 * t, 1.0 + 2.0 * t)).norm() < 1e-12);
    CHECK(u.acceleration(t).norm() < 1e-10);
  }
  CHECK(u.smoothness_cost(Vector2d(1.0, 1.0)) ==
        doctest::Approx(0.5 * (0.25 + 4.0) * T).epsilon(1e-12));
}

TEST_CASE("smoothness cost matches quadrature and its gradient matches FD") {
  const int n = 9;
  const double T = 4.0;
  Matrix2Xd s(2, n + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = T * k / n;
    s(0, k) = std::sin(t);
    s(1, k) = t * t / 8.0;
  }
  ControlSignal u(T, s);
  const Vector2d nu(0.7, 1.9);

  // Fine trapezoid of nu_i * v_i^2 / 2.
  const int m = 20000;
  double quad = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double t = T * k / m;
    const Vector2d v = u.velocity(t);
    const double w = (k == 0 || k == m) ? 0.5 : 1.0;
    quad += w * 0.5 * (nu[0] * v[0] * v[0] + nu[1] * v[1] * v[1]);
  }
  quad *= T / m;
  CHECK(u.smoothness_cost(nu) == doctest::Approx(quad).epsilon(1e-7));

  const Matrix2Xd grad = u.smoothness_gradient(nu);
  const double eps = 1e-6;
  for (int k : {1, 4, 8}) {
    for (int axis = 0; axis < 2; ++axis) {
      Matrix2Xd sp = s, sm = s;
      sp(axis, k) += eps;
      sm(axis, k) -= eps;
      const double fd = (ControlSignal(T, sp).smoothness_cost(nu) -
                         ControlSignal(T, sm).smoothness_cost(nu)) /
                        (2 * eps);
      CHECK(grad(axis, k) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("evaluation adjoint matches finite differences") {
  const int n = 8;
  const double T = 2.0;
  Matrix2Xd s = Matrix2Xd::Zero(2, n + 1);
  for (int k = 0; k <= n; ++k) s(0, k) = std::cos(k), s(1, k) = 0.1 * k * k;
  ControlSignal u(T, s);
  const std::vector<double> times{0.15, 0.71, 1.3, 1.95};
  Matrix2Xd coef(2, 4);
  coef << 0.3, -1.2, 0.8, 0.5, 1.1, 0.4, -0.7, 0.9;

  auto value_of = [&](const Matrix2Xd& samples) {
    ControlSignal c(T, samples);
    double acc = 0.0;
    for (size_t m = 0; m < times.size(); ++m)
      acc += coef.col(m).dot(c.value(times[m]));
    return acc;
  };

  const Matrix2Xd adj = u.evaluation_adjoint(times, coef);
  const double eps = 1e-6;
  for (int k = 0; k <= n; ++k)
    for (int axis = 0; axis < 2; ++axis) {
      Matrix2Xd sp = s, sm = s;
      sp(axis, k) += eps;
      sm(axis, k) -= eps;
      const double fd = (value_of(sp) - value_of(sm)) / (2 * eps);
      CHECK(adj(axis, k) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("circle loop samples") {
  const Vector2d c(0, 11.5);
  const Matrix2Xd s = aa::circle_loop_samples(c, 7.0, Vector2d(0, 1), true, 60);
  REQUIRE(s.cols() == 61);
  CHECK((s.col(0) - Vector2d(0, 18.5)).norm() < 1e-14);
  CHECK((s.col(0) - s.col(60)).norm() == 0.0);  // exact closure
  for (int k = 0; k <= 60; ++k)
    CHECK((s.col(k) - c).norm() == doctest::Approx(7.0).epsilon(1e-13));
  // CCW means the first step rotates +90 degrees from the start direction.
  CHECK(s(0, 1) < 0.0);
  const Matrix2Xd scw =
      aa::circle_loop_samples(c, 7.0, Vector2d(0, 1), false, 60);
  CHECK(scw(0, 1) > 0.0);
}

TEST_CASE("ellipse loop samples, both height signs") {
  const Vector2d start(0, 26.3), toward(0, -1);
  const Matrix2Xd s = aa::ellipse_loop_samples(start, toward, 8.0, 3.0, true, 40);
  REQUIRE(s.cols() == 41);
  CHECK((s.col(0) - start).norm() < 1e-14);
  CHECK((s.col(0) - s.col(40)).norm() == 0.0);
  // Far point at start + height * toward.
  CHECK((s.col(20) - Vector2d(0, 18.3)).norm() < 1e-12);
  double max_lat = 0.0;
  for (int k = 0; k <= 40; ++k) max_lat = std::max(max_lat, std::abs(s(0, k)));
  CHECK(max_lat == doctest::Approx(3.0).epsilon(1e-3));

  const Matrix2Xd away =
      aa::ellipse_loop_samples(start, toward, -8.0, 0.0, true, 40);
  CHECK((away.col(20) - Vector2d(0, 34.3)).norm() < 1e-12);
  for (int k = 0; k <= 40; ++k) CHECK(away(0, k) == 0.0);  // degenerate width

  CHECK_THROWS_AS(aa::ellipse_loop_samples(start, toward, 0.0, 1.0, true, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(aa::ellipse_loop_samples(start, toward, 3.0, -1.0, true, 8),
                  std::invalid_argument);
}

}  // TEST_SUITE
