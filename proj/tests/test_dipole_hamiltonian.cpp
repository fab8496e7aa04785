#include <doctest/doctest.h>

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "aaphase/constants.hpp"
#include "aaphase/dipole_hamiltonian.hpp"
#include "aaphase/errors.hpp"

using aa::DipoleInteraction;
using Eigen::Matrix4d;
using Eigen::Vector2d;
using Eigen::Vector4d;

namespace {

// Interaction with unit C3 and the quantization axis along y, so that a pair
// displaced by (R sin(theta), R cos(theta)) realizes orientation angle theta.
DipoleInteraction unit_interaction() {
  return DipoleInteraction(1.0, Vector2d(0, 1), 0.25);
}

Matrix4d projected_matrix(double theta) {
  const auto inter = unit_interaction();
  const Vector2d r2(std::sin(theta), std::cos(theta));  // R = 1
  return inter.hamiltonian(Vector2d::Zero(), r2);
}

Matrix4d sym(std::initializer_list<double> upper) {
  // Row-major upper triangle (10 entries) -> full symmetric matrix.
  Matrix4d m;
  auto it = upper.begin();
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      m(i, j) = *it++;
      m(j, i) = m(i, j);
    }
  return m;
}

}  // namespace

TEST_SUITE("dipole") {

TEST_CASE("projected matrix at the axis-aligned orientation") {
  const Matrix4d expect = sym({-0.3, -0.20412414523193150818, 0, 0,
                               -0.28171808490950552584, 0, 0,
                               -0.16903085094570331550, 0,
                               -0.056343616981901105167});
  CHECK((projected_matrix(0.0) - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("projected matrix at the perpendicular orientation") {
  const Matrix4d expect = sym({0.15, 0.10206207261596575409, 0,
                               -0.096824583655185422129,
                               0.14085904245475276292, 0, 0,
                               0.084515425472851657751, 0,
                               0.028171808490950552584});
  CHECK((projected_matrix(aa::units::pi / 2) - expect).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("projected matrix at the magic angle has zero diagonal") {
  const double magic = std::acos(1.0 / std::sqrt(3.0));
  const Matrix4d m = projected_matrix(magic);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(m(i, i)) < 1e-14);
  CHECK(m(0, 2) == doctest::Approx(-0.12909944487358056284).epsilon(1e-13));
  CHECK(m(0, 3) == doctest::Approx(-0.064549722436790281420).epsilon(1e-13));
  CHECK(m(1, 2) == doctest::Approx(-0.089087080637474794895).epsilon(1e-13));
  CHECK(m(2, 3) == doctest::Approx(-0.11268723396380221033).epsilon(1e-13));
  CHECK(m(1, 3) == doctest::Approx(0.0));
}

TEST_CASE("projected matrix at a generic angle") {
  const Matrix4d expect = sym(
      {-0.11324260715255421119, -0.077051834629501805308,
       -0.13493826160051370019, -0.040183792904404094190,
       -0.10634163472392348349, -0.093116246968043404208, 0,
       -0.063804980834354090095, -0.11778377103430609700,
       -0.021268326944784696698});
  CHECK((projected_matrix(0.7) - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("full interaction at the working strength") {
  // C3/h = 2.39 GHz um^3, pair along the axis at R = 10 um, in rad/us.
  const double c3 = 2.39 * aa::units::GHzum3_to_internal;
  DipoleInteraction inter(c3, Vector2d(0, 1), 1.0);
  const Matrix4d h = inter.hamiltonian(Vector2d(0, 0), Vector2d(0, 10));
  const Matrix4d expect =
      sym({-4.5050438652477635040, -3.0652940940868551883, 0, 0,
           -4.2305077671697213640, 0, 0, -2.5383046603018328184, 0,
           -0.84610155343394427280});
  CHECK((h - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("inverse-cube law") {
  const auto inter = unit_interaction();
  const Matrix4d h1 = inter.hamiltonian(Vector2d(0, 0), Vector2d(1.3, 2.1));
  const Matrix4d h2 = inter.hamiltonian(Vector2d(0, 0), Vector2d(2.6, 4.2));
  CHECK((h1 - 8.0 * h2).cwiseAbs().maxCoeff() < 1e-13 * h1.cwiseAbs().maxCoeff());
}

TEST_CASE("mirror symmetry flips the sign of the third channel") {
  const Matrix4d plus = projected_matrix(0.6);
  const Matrix4d minus = projected_matrix(-0.6);
  Matrix4d d = Matrix4d::Identity();
  d(2, 2) = -1.0;
  CHECK((minus - d * plus * d).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("hamiltonian is symmetric and translation invariant") {
  const auto inter = unit_interaction();
  const Vector2d r1(0.3, -0.8), r2(2.2, 1.7), shift(5.0, -3.0);
  const Matrix4d h = inter.hamiltonian(r1, r2);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  const Matrix4d hs = inter.hamiltonian(r1 + shift, r2 + shift);
  CHECK((h - hs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("radial derivative obeys the power law") {
  const auto inter = unit_interaction();
  const Vector2d r1(0.0, 0.0), r2(1.8, 2.4);
  const auto g = inter.geometry(r1, r2, true);
  const Vector2d rho_hat = (r2 - r1).normalized();
  const Matrix4d dh = inter.rho_derivative(g, rho_hat);
  const Matrix4d h = inter.hamiltonian(g);
  CHECK((dh + 3.0 / g.R * h).cwiseAbs().maxCoeff() <
        1e-12 * h.cwiseAbs().maxCoeff());
}

TEST_CASE("gradient matches finite differences") {
  const auto inter = unit_interaction();
  const Vector2d r1(0.4, -0.2), r2(2.0, 1.1);
  const auto g = inter.geometry(r1, r2, true);
  const auto grad = inter.rho_gradient(g);
  const double eps = 1e-4;
  for (int axis = 0; axis < 2; ++axis) {
    Vector2d dp = Vector2d::Zero(), dm = Vector2d::Zero();
    dp[axis] = eps;
    dm[axis] = -eps;
    const Matrix4d fd =
        (inter.hamiltonian(r1, r2 + dp) - inter.hamiltonian(r1, r2 + dm)) /
        (2 * eps);
    CHECK((grad[axis] - fd).cwiseAbs().maxCoeff() <
          1e-6 * fd.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("state weights reconstruct the expectation value") {
  const auto inter = unit_interaction();
  const Vector2d r1(0, 0), r2(1.1, 2.3);
  const auto g = inter.geometry(r1, r2);
  Vector4d re, im;
  re << 0.2, -0.5, 0.4, 0.1;
  im << 0.3, 0.2, -0.6, 0.25;
  const auto w = inter.state_weights(re, im);
  const double e = inter.energy(g, w);
  const Eigen::Vector4cd psi =
      re.cast<std::complex<double>>() +
      std::complex<double>(0, 1) * im.cast<std::complex<double>>();
  const Matrix4d h = inter.hamiltonian(g);
  const double direct = std::real(psi.dot(h * psi));  // dot conjugates lhs
  CHECK(e == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("energy gradient and hessian match finite differences") {
  const auto inter = unit_interaction();
  const Vector2d r1(0, 0), r2(1.5, 1.9);
  Vector4d re, im;
  re << 0.6, 0.2, -0.3, 0.4;
  im << 0.1, -0.4, 0.2, 0.45;
  const auto w = inter.state_weights(re, im);
  const auto g = inter.geometry(r1, r2, true, true);
  const Vector2d grad = inter.energy_grad_rho(g, w);
  const Eigen::Matrix2d hess = inter.energy_hess_rho(g, w);
  const double eps = 1e-5;
  for (int a = 0; a < 2; ++a) {
    Vector2d d = Vector2d::Zero();
    d[a] = eps;
    const auto gp = inter.geometry(r1, r2 + d);
    const auto gm = inter.geometry(r1, Vector2d(r2 - d));
    const double fd = (inter.energy(gp, w) - inter.energy(gm, w)) / (2 * eps);
    CHECK(grad[a] == doctest::Approx(fd).epsilon(1e-7));
    const auto ggp = inter.geometry(r1, r2 + d, true);
    const auto ggm = inter.geometry(r1, Vector2d(r2 - d), true);
    const Vector2d fdg = (inter.energy_grad_rho(ggp, w) -
                          inter.energy_grad_rho(ggm, w)) /
                         (2 * eps);
    CHECK((hess.col(a) - fdg).norm() < 1e-6 * hess.norm());
  }
}

TEST_CASE("cross weights are the bilinear companion of state weights") {
  const auto inter = unit_interaction();
  Vector4d are, aim, bre, bim;
  are << 0.3, 0.1, -0.2, 0.6;
  aim << -0.1, 0.5, 0.2, 0.1;
  bre << 0.7, -0.3, 0.2, 0.2;
  bim << 0.2, 0.2, -0.5, 0.3;
  const auto cross = inter.cross_weights(are, aim, bre, bim);
  // z_t = 2 Re(phi^dag C_t psi); check against the term matrices directly.
  const auto& C = inter.term_matrices();
  const Eigen::Vector4cd phi =
      are.cast<std::complex<double>>() +
      std::complex<double>(0, 1) * aim.cast<std::complex<double>>();
  const Eigen::Vector4cd psi =
      bre.cast<std::complex<double>>() +
      std::complex<double>(0, 1) * bim.cast<std::complex<double>>();
  for (int t = 0; t < 4; ++t) {
    const double direct = 2.0 * std::real(phi.dot(C[t] * psi));
    CHECK(cross[t] == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("guard radius rejects close approach") {
  DipoleInteraction inter(1.0, Vector2d(0, 1), 1.0);
  CHECK_THROWS_AS(inter.geometry(Vector2d(0, 0), Vector2d(0, 0.5)),
                  aa::GeometryError);
  CHECK_NOTHROW(inter.geometry(Vector2d(0, 0), Vector2d(0, 1.5)));
}

}  // TEST_SUITE
