#include "aaphase/phase_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "aaphase/errors.hpp"

namespace aa {

double wrap_degrees(double x) {
  double y = std::fmod(x, 360.0);
  if (y <= -180.0) y += 360.0;
  if (y > 180.0) y -= 360.0;
  return y;
}

double wrap_radians(double x) {
  double y = std::fmod(x, 2.0 * M_PI);
  if (y <= -M_PI) y += 2.0 * M_PI;
  if (y > M_PI) y -= 2.0 * M_PI;
  return y;
}

namespace {

// Multiply by a unit phase so the first component with |v_i| > tol becomes
// real positive; leaves near-zero vectors untouched.
template <typename Vec>
void fix_phase(Vec& v) {
  constexpr double tol = 1e-12;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > tol) {
      v *= std::conj(v[i]) / a;
      return;
    }
  }
}

}  // namespace

SeparabilityResult separability(const Eigen::Vector4cd& psi) {
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-9)
    throw std::invalid_argument("separability: state is not normalized");

  // Coefficient matrix C (2x4) of the embedded state: row 0 holds the dd
  // amplitude at column 0, row 1 holds the pf amplitudes at columns 1..3.
  // C C^dag is diagonal, so the left factor is e0 or e1 outright.
  const double w_dd = std::norm(psi[0]);
  const double w_pf = std::norm(psi[1]) + std::norm(psi[2]) + std::norm(psi[3]);

  SeparabilityResult out;
  out.eta1.setZero();
  // Tie-break at w_dd == w_pf: keep the dd branch (projection of e0 onto the
  // degenerate eigenspace).
  out.eta1[(w_dd >= w_pf) ? 0 : 1] = 1.0;

  // Best matching partner: a_j = sum_i conj(C_ij) eta1_i, eta2 = conj(a)/|a|,
  // which attains |<Psi|eta1 (x) eta2>| = |a|.
  Eigen::Vector4cd a = Eigen::Vector4cd::Zero();
  if (w_dd >= w_pf) {
    a[0] = std::conj(psi[0]);
  } else {
    a[1] = std::conj(psi[1]);
    a[2] = std::conj(psi[2]);
    a[3] = std::conj(psi[3]);
  }
  const double norm_a = a.norm();
  out.fidelity = norm_a;
  if (norm_a > 1e-300) {
    out.eta2 = a.conjugate() / norm_a;
  } else {
    // Degenerate branch amplitude (e.g. psi_dd == 0 on the dd branch);
    // any unit partner is optimal, pick the basis state.
    out.eta2.setZero();
    out.eta2[(w_dd >= w_pf) ? 0 : 1] = 1.0;
  }
  fix_phase(out.eta1);
  fix_phase(out.eta2);
  return out;
}

CyclicSpectrum aa_eigenphases(const Eigen::Matrix4cd& U) {
  const double defect =
      (U.adjoint() * U - Eigen::Matrix4cd::Identity()).norm();
  if (!(defect <= 1e-6))
    throw NumericError("aa_eigenphases: input is not unitary (defect " +
                       std::to_string(defect) + ")");

  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(U);
  if (es.info() != Eigen::Success)
    throw NumericError("aa_eigenphases: eigendecomposition failed");

  std::array<int, 4> order{0, 1, 2, 3};
  Eigen::Vector4d phases;
  for (int i = 0; i < 4; ++i)
    phases[i] = wrap_radians(std::arg(es.eigenvalues()[i]));
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return phases[a] < phases[b]; });

  CyclicSpectrum out;
  for (int i = 0; i < 4; ++i) {
    out.phases[i] = phases[order[i]];
    Eigen::Vector4cd v = es.eigenvectors().col(order[i]);
    v.normalize();
    fix_phase(v);
    out.vectors.col(i) = v;
  }
  return out;
}

PhaseBreakdown analyze_phases(const TrajectoryRecord& record) {
  if (record.samples.size() < 2)
    throw std::invalid_argument("analyze_phases: record has no samples");

  const Eigen::Vector4cd psi0 = record.initial_state().psi();
  const Eigen::Vector4cd psiT = record.final_state().psi();
  const std::complex<double> c = psi0.dot(psiT);  // <psi0|psiT>

  PhaseBreakdown out;
  out.overlap_abs = std::abs(c);
  if (out.overlap_abs < 1e-6)
    throw NumericError(
        "analyze_phases: terminal overlap with the initial state is "
        "degenerate; the total phase is undefined");

  out.gamma_total_rad = wrap_radians(std::arg(c));
  out.gamma_d_rad = record.gamma_d_final();
  out.gamma_g_rad = wrap_radians(out.gamma_total_rad - out.gamma_d_rad);

  const SeparabilityResult sep = separability(psiT.normalized());
  out.fidelity = sep.fidelity;
  out.eta1 = sep.eta1;
  out.eta2 = sep.eta2;
  for (int i = 0; i < 4; ++i) out.final_occupation[i] = std::norm(psiT[i]);
  if (record.propagator) out.spectrum = aa_eigenphases(*record.propagator);
  return out;
}

}  // namespace aa
