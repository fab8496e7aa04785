#include <doctest/doctest.h>

#include <cmath>
#include <stdexcept>

#include "aaphase/angular.hpp"

#ifdef AAPHASE_HAVE_GSL
#include <gsl/gsl_sf_coupling.h>
#endif

using aa::dipole_element;
using aa::wigner3j;

TEST_SUITE("angular") {

TEST_CASE("three-j reference values") {
  // Values frozen from an independent Racah-formula evaluation.
  CHECK(wigner3j(1, 1, 0, 0, 0, 0) ==
        doctest::Approx(-0.57735026918962576451).epsilon(1e-14));
  CHECK(wigner3j(1.5, 1, 1.5, 1.5, 0, -1.5) ==
        doctest::Approx(0.38729833462074168852).epsilon(1e-14));
  CHECK(wigner3j(2.5, 1, 1.5, 2.5, -1, -1.5) ==
        doctest::Approx(-0.40824829046386301637).epsilon(1e-14));
  CHECK(wigner3j(2.5, 1, 2.5, 2.5, 0, -2.5) ==
        doctest::Approx(0.34503277967117710890).epsilon(1e-14));
  CHECK(wigner3j(2.5, 1, 2.5, 2.5, 1, -2.5) == doctest::Approx(0.0));
  CHECK(wigner3j(2.5, 1, 2.5, 1.5, 1, -2.5) ==
        doctest::Approx(-0.21821789023599238127).epsilon(1e-14));
  CHECK(wigner3j(0.5, 1, 1.5, 0.5, 1, -1.5) ==
        doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(wigner3j(0.5, 1, 0.5, 0.5, 1, -0.5) == doctest::Approx(0.0));
}

TEST_CASE("three-j selection rules return zero") {
  CHECK(wigner3j(1, 1, 1, 1, 1, 1) == 0.0);        // m-sum != 0
  CHECK(wigner3j(1, 1, 3, 0, 0, 0) == 0.0);        // triangle violated
  CHECK(wigner3j(0.5, 0.5, 0.5, 0.5, -0.5, 0.0) == 0.0);  // j-sum half-odd
}

TEST_CASE("three-j invalid arguments throw") {
  CHECK_THROWS_AS(wigner3j(-1, 1, 1, 0, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(wigner3j(1, 1, 1, 2, -2, 0), std::invalid_argument);  // |m|>j
  CHECK_THROWS_AS(wigner3j(1, 1, 1, 0.5, -0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(wigner3j(1.3, 1, 1, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("three-j symmetries") {
  // Even column permutation leaves the symbol unchanged, odd permutation
  // multiplies by (-1)^(j1+j2+j3), and so does flipping every m.
  const double j1 = 2.5, j2 = 1, j3 = 1.5;
  const double m1 = 1.5, m2 = -1, m3 = -0.5;
  const double base = wigner3j(j1, j2, j3, m1, m2, m3);
  const double sign = std::pow(-1.0, j1 + j2 + j3);
  CHECK(wigner3j(j2, j3, j1, m2, m3, m1) == doctest::Approx(base).epsilon(1e-13));
  CHECK(wigner3j(j2, j1, j3, m2, m1, m3) ==
        doctest::Approx(sign * base).epsilon(1e-13));
  CHECK(wigner3j(j1, j2, j3, -m1, -m2, -m3) ==
        doctest::Approx(sign * base).epsilon(1e-13));
}

TEST_CASE("three-j orthogonality sum") {
  // sum over m1, m2 of (2 j3 + 1) * 3j(j1 j2 j3; m1 m2 m3)^2 = 1.
  const double j1 = 2.5, j2 = 1, j3 = 1.5, m3 = 0.5;
  double sum = 0.0;
  for (double m1 = -j1; m1 <= j1; m1 += 1.0)
    for (double m2 = -j2; m2 <= j2; m2 += 1.0)
      if (m1 + m2 - m3 == 0.0) {
        const double w = wigner3j(j1, j2, j3, m1, m2, -m3);
        sum += (2 * j3 + 1) * w * w;
      }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
}

#ifdef AAPHASE_HAVE_GSL
TEST_CASE("three-j agrees with GSL over all small angular momenta") {
  for (int tj1 = 0; tj1 <= 6; ++tj1)
    for (int tj2 = 0; tj2 <= 6; ++tj2)
      for (int tj3 = 0; tj3 <= 6; ++tj3)
        for (int tm1 = -tj1; tm1 <= tj1; tm1 += 2)
          for (int tm2 = -tj2; tm2 <= tj2; tm2 += 2) {
            const int tm3 = -tm1 - tm2;
            if (std::abs(tm3) > tj3) continue;
            if ((tj1 + tm1) % 2 || (tj2 + tm2) % 2 || (tj3 + tm3) % 2)
              continue;
            const double ours = wigner3j(tj1 / 2.0, tj2 / 2.0, tj3 / 2.0,
                                         tm1 / 2.0, tm2 / 2.0, tm3 / 2.0);
            const double ref = gsl_sf_coupling_3j(tj1, tj2, tj3, tm1, tm2, tm3);
            CHECK(ours == doctest::Approx(ref).epsilon(1e-12));
          }
}
#endif

TEST_CASE("dipole matrix elements") {
  // (j, m) levels: d = (3/2, 3/2), p = (1/2, 1/2),
  // f52 = (5/2, 5/2), f32 = (5/2, 3/2), f12 = (5/2, 1/2).
  CHECK(dipole_element(0.5, 0.5, -1, 1.5, 1.5) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(dipole_element(1.5, 1.5, +1, 0.5, 0.5) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(dipole_element(2.5, 2.5, +1, 1.5, 1.5) ==
        doctest::Approx(0.40824829046386301637).epsilon(1e-14));
  CHECK(dipole_element(1.5, 1.5, -1, 2.5, 2.5) ==
        doctest::Approx(0.40824829046386301637).epsilon(1e-14));
  CHECK(dipole_element(2.5, 1.5, 0, 1.5, 1.5) ==
        doctest::Approx(0.25819888974716112568).epsilon(1e-14));
  CHECK(dipole_element(1.5, 1.5, 0, 2.5, 1.5) ==
        doctest::Approx(-0.25819888974716112568).epsilon(1e-14));
  CHECK(dipole_element(2.5, 0.5, -1, 1.5, 1.5) ==
        doctest::Approx(0.12909944487358056284).epsilon(1e-14));
  CHECK(dipole_element(1.5, 1.5, +1, 2.5, 0.5) ==
        doctest::Approx(0.12909944487358056284).epsilon(1e-14));
  // Diagonal q = 0 elements.
  CHECK(dipole_element(1.5, 1.5, 0, 1.5, 1.5) ==
        doctest::Approx(0.38729833462074168852).epsilon(1e-14));
  CHECK(dipole_element(0.5, 0.5, 0, 0.5, 0.5) ==
        doctest::Approx(0.40824829046386301637).epsilon(1e-14));
  CHECK(dipole_element(2.5, 2.5, 0, 2.5, 2.5) ==
        doctest::Approx(0.34503277967117710890).epsilon(1e-14));
  CHECK(dipole_element(2.5, 1.5, 0, 2.5, 1.5) ==
        doctest::Approx(0.20701966780270626534).epsilon(1e-14));
  CHECK(dipole_element(2.5, 0.5, 0, 2.5, 0.5) ==
        doctest::Approx(0.069006555934235421780).epsilon(1e-14));
  // In-manifold q = +1 hops.
  CHECK(dipole_element(2.5, 2.5, +1, 2.5, 1.5) ==
        doctest::Approx(-0.21821789023599238127).epsilon(1e-14));
  CHECK(dipole_element(2.5, 1.5, +1, 2.5, 0.5) ==
        doctest::Approx(-0.27602622373694168712).epsilon(1e-14));
}

TEST_CASE("dipole element conjugation pattern") {
  // <a| d_q |b> = (-1)^(q + ja - jb) <b| d_-q |a> for real reduced elements.
  const double levels[][2] = {{1.5, 1.5}, {0.5, 0.5}, {2.5, 2.5},
                              {2.5, 1.5}, {2.5, 0.5}};
  for (const auto& a : levels)
    for (const auto& b : levels)
      for (int q = -1; q <= 1; ++q) {
        const double lhs = dipole_element(a[0], a[1], q, b[0], b[1]);
        const double rhs = dipole_element(b[0], b[1], -q, a[0], a[1]);
        const double sign = std::pow(-1.0, q + a[0] - b[0]);
        CHECK(lhs == doctest::Approx(sign * rhs).epsilon(1e-13));
      }
}

}  // TEST_SUITE
