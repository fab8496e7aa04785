#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>

#include "aaphase/dynamics.hpp"

// Phase bookkeeping for a closed-loop run:
//   gamma_total = arg <psi(0)|psi(T)>              (defined mod 2 pi)
//   gamma_d     = -int <psi|H|psi> dt              (real, never wrapped)
//   gamma_g     = wrap(gamma_total - gamma_d)      (into (-pi, pi])
// plus the product-state fidelity of the terminal state and, when the run
// recorded a propagator, the cyclic eigenphases/eigenvectors of U(T).

namespace aa {

// Wrap into (-180, 180] degrees / (-pi, pi] radians.
double wrap_degrees(double x);
double wrap_radians(double x);

struct SeparabilityResult {
  double fidelity = 0.0;        // max |<Psi|eta1 (x) eta2>| over product states
  Eigen::Vector2cd eta1;        // factor for atom 1 in the {d, p} basis
  Eigen::Vector4cd eta2;        // factor for atom 2 in the {d, f52, f32, f12} basis
};

// Closed-form best product-state approximation of a normalized channel
// state psi = (psi_dd, psi_pf1, psi_pf2, psi_pf3).  The channel basis embeds
// into the two-atom product space as dd -> (0,0), pf1 -> (1,1), pf2 -> (1,2),
// pf3 -> (1,3); the resulting 2x4 coefficient matrix has orthogonal rows, so
// the top singular value is max(|psi_dd|, sqrt(1 - |psi_dd|^2)) for unit
// norm.  Factors are phase-fixed so their first non-negligible component is
// real positive.
SeparabilityResult separability(const Eigen::Vector4cd& psi);

struct CyclicSpectrum {
  Eigen::Vector4d phases;       // eigenphases of U in (-pi, pi], ascending
  Eigen::Matrix4cd vectors;     // matching eigenvectors (columns, phase-fixed)
};

// Eigenphases of a propagator; throws NumericError unless ||U^dag U - I||_F
// <= 1e-6.
CyclicSpectrum aa_eigenphases(const Eigen::Matrix4cd& U);

struct PhaseBreakdown {
  double overlap_abs = 0.0;
  double gamma_total_rad = 0.0;  // wrapped into (-pi, pi]
  double gamma_d_rad = 0.0;      // unwrapped
  double gamma_g_rad = 0.0;      // wrapped into (-pi, pi]
  double fidelity = 0.0;
  Eigen::Vector2cd eta1;
  Eigen::Vector4cd eta2;
  std::array<double, 4> final_occupation{};
  std::optional<CyclicSpectrum> spectrum;  // present when the record has U
};

// Throws NumericError when |<psi(0)|psi(T)>| < 1e-6 (total phase undefined).
PhaseBreakdown analyze_phases(const TrajectoryRecord& record);

}  // namespace aa
