#include <doctest/doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "aaphase/constants.hpp"
#include "aaphase/dynamics.hpp"
#include "aaphase/errors.hpp"
#include "aaphase/phase_analysis.hpp"
#include "aaphase/rng.hpp"

using aa::AtomPairState;
using aa::ControlSignal;
using aa::DipoleInteraction;
using aa::FieldSet;
using aa::IntegrateOptions;
using aa::SystemModel;
using aa::TweezerField;
using Eigen::Vector2d;
using Eigen::Vector4cd;

namespace {

SystemModel model_for_phases() {
  TweezerField stat;
  stat.depth = 4.0 * aa::units::mK_to_radus;
  stat.sigma = 2.0;
  TweezerField mob;
  mob.depth = 10.0 * aa::units::mK_to_radus;
  mob.sigma = 2.0;
  mob.mobile = true;
  return SystemModel{
      DipoleInteraction(2.39 * aa::units::GHzum3_to_internal, Vector2d(0, 1),
                        1.0),
      FieldSet({stat, mob}), aa::units::rb87_mass_internal};
}

// Deterministic pseudo-random unit state from the counter RNG.
Vector4cd random_state(const aa::Philox& rng, uint64_t index) {
  const auto n1 = rng.normal_pair(index, 0, 7);
  const auto n2 = rng.normal_pair(index, 1, 7);
  const auto n3 = rng.normal_pair(index, 2, 7);
  const auto n4 = rng.normal_pair(index, 3, 7);
  Vector4cd v;
  v << std::complex<double>(n1[0], n1[1]), std::complex<double>(n2[0], n2[1]),
      std::complex<double>(n3[0], n3[1]), std::complex<double>(n4[0], n4[1]);
  return v / v.norm();
}

// Dense reference: the channel basis embeds into the 2 x 4 product space as
// dd -> (0,0), pf1 -> (1,1), pf2 -> (1,2), pf3 -> (1,3); the best product
// fidelity is the top singular value of that coefficient matrix.
double svd_fidelity(const Vector4cd& psi) {
  Eigen::Matrix<std::complex<double>, 2, 4> coef;
  coef.setZero();
  coef(0, 0) = psi[0];
  coef(1, 1) = psi[1];
  coef(1, 2) = psi[2];
  coef(1, 3) = psi[3];
  Eigen::JacobiSVD<Eigen::Matrix<std::complex<double>, 2, 4>> svd(coef);
  return svd.singularValues()[0];
}

}  // namespace

TEST_SUITE("phase_analysis") {

TEST_CASE("angle wrapping") {
  CHECK(aa::wrap_degrees(190.0) == doctest::Approx(-170.0));
  CHECK(aa::wrap_degrees(-181.0) == doctest::Approx(179.0));
  CHECK(aa::wrap_degrees(180.0) == doctest::Approx(180.0));
  CHECK(aa::wrap_degrees(540.0) == doctest::Approx(180.0));
  CHECK(aa::wrap_radians(3 * aa::units::pi) == doctest::Approx(aa::units::pi));
  CHECK(aa::wrap_radians(-0.2) == doctest::Approx(-0.2));
}

TEST_CASE("separability agrees with a dense SVD on random states") {
  aa::Philox rng(0x5eed5eedULL);
  for (uint64_t i = 0; i < 1000; ++i) {
    const Vector4cd psi = random_state(rng, i);
    const auto res = aa::separability(psi);
    CHECK(std::abs(res.fidelity - svd_fidelity(psi)) < 1e-10);
    // The reported factors realize the reported fidelity.
    Vector4cd prod = Vector4cd::Zero();
    prod[0] = res.eta1[0] * res.eta2[0];
    prod[1] = res.eta1[1] * res.eta2[1];
    prod[2] = res.eta1[1] * res.eta2[2];
    prod[3] = res.eta1[1] * res.eta2[3];
    CHECK(std::abs(std::abs(psi.dot(prod)) - res.fidelity) < 1e-10);
  }
}

TEST_CASE("product basis state has unit fidelity") {
  Vector4cd dd = Vector4cd::Zero();
  dd[0] = 1.0;
  CHECK(std::abs(aa::separability(dd).fidelity - 1.0) < 1e-12);
  // A balanced superposition of dd and pf1 is maximally entangled here.
  Vector4cd bell = Vector4cd::Zero();
  bell[0] = bell[1] = 1.0 / std::sqrt(2.0);
  CHECK(aa::separability(bell).fidelity ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("total phase is invariant under a global phase of the state") {
  const auto model = model_for_phases();
  Eigen::Matrix2Xd knots(2, 5);
  // A gentle open arc; phases only need a well-defined overlap.
  for (int k = 0; k <= 4; ++k)
    knots.col(k) = Vector2d(0.3 * std::sin(0.5 * k), 10.0 - 0.1 * k);
  const ControlSignal ctrl(6.0, knots);
  IntegrateOptions opts;
  opts.dt = 1e-3;

  double gamma_g_ref = 0.0;
  bool have_ref = false;
  for (double alpha : {0.0, 0.1, 1.0, 3.0}) {
    AtomPairState st;
    st.r1 = Vector2d(0, 10);
    st.r2 = Vector2d(0, 0);
    st.p1 = Vector2d(0, 0);
    st.psi_re[0] = std::cos(alpha);
    st.psi_im[0] = std::sin(alpha);
    const auto rec = aa::integrate(model, st, ctrl, opts);
    const auto pb = aa::analyze_phases(rec);
    if (!have_ref) {
      gamma_g_ref = pb.gamma_g_rad;
      have_ref = true;
    } else {
      CHECK(std::abs(pb.gamma_g_rad - gamma_g_ref) * aa::units::deg_per_rad <
            1e-9);
    }
  }
}

TEST_CASE("phase decomposition is consistent") {
  const auto model = model_for_phases();
  const ControlSignal ctrl(8.0, Eigen::Matrix2Xd::Constant(2, 3, 0.0).colwise() +
                                    Eigen::Vector2d(0, 10));
  AtomPairState st;
  st.r1 = Vector2d(0, 10);
  st.r2 = Vector2d(0, 0);
  st.psi_re[0] = 1.0;
  IntegrateOptions opts;
  opts.dt = 1e-3;
  const auto rec = aa::integrate(model, st, ctrl, opts);
  const auto pb = aa::analyze_phases(rec);
  CHECK(pb.overlap_abs ==
        doctest::Approx(std::abs(st.psi().dot(rec.final_state().psi())))
            .epsilon(1e-12));
  CHECK(pb.gamma_d_rad == doctest::Approx(rec.gamma_d_final()).epsilon(1e-12));
  CHECK(aa::wrap_radians(pb.gamma_total_rad - pb.gamma_d_rad) ==
        doctest::Approx(pb.gamma_g_rad).epsilon(1e-10));
  double occ = 0.0;
  for (double o : pb.final_occupation) occ += o;
  CHECK(occ == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("cyclic eigenphases of a constant-field propagator") {
  const auto model = model_for_phases();
  const Vector2d a(0, 10), b(0, 0);
  AtomPairState st;
  st.r1 = a;
  st.r2 = b;
  st.psi_re[0] = 1.0;
  IntegrateOptions opts;
  opts.dt = 1e-3;
  opts.pin_positions = true;
  opts.record_propagator = true;
  const double T = 3.0;
  const ControlSignal ctrl(T, (Eigen::Matrix2Xd(2, 3) << a, a, a).finished());
  const auto rec = aa::integrate(model, st, ctrl, opts);
  const auto spec = aa::aa_eigenphases(*rec.propagator);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(
      model.interaction.hamiltonian(a, b));
  Eigen::Vector4d expect;
  for (int k = 0; k < 4; ++k)
    expect[k] = aa::wrap_radians(-es.eigenvalues()[k] * T);
  std::sort(expect.data(), expect.data() + 4);
  for (int k = 0; k < 4; ++k)
    CHECK(spec.phases[k] == doctest::Approx(expect[k]).epsilon(1e-8));
}

TEST_CASE("eigenphase extraction rejects non-unitary input") {
  Eigen::Matrix4cd bad = Eigen::Matrix4cd::Identity() * 1.1;
  CHECK_THROWS_AS(aa::aa_eigenphases(bad), aa::NumericError);
}

TEST_CASE("degenerate overlap is rejected") {
  // Synthesize a record whose initial and final states are orthogonal.
  aa::TrajectoryRecord rec;
  rec.duration = 1.0;
  rec.dt = 1.0;
  rec.substeps = 1;
  rec.sample_t = {0.0, 1.0};
  AtomPairState s0, s1;
  s0.psi_re[0] = 1.0;
  s1.psi_re[1] = 1.0;
  rec.samples = {s0, s1};
  rec.sample_energy = {0.0, 0.0};
  rec.sample_gamma_d = {0.0, 0.0};
  CHECK_THROWS_AS(aa::analyze_phases(rec), aa::NumericError);
}

}  // TEST_SUITE
