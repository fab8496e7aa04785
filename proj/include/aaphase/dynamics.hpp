#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "aaphase/control.hpp"
#include "aaphase/dipole_hamiltonian.hpp"
#include "aaphase/tweezer.hpp"

// Coupled semiclassical propagation: classical point atoms (positions r^a,
// momenta p^a, a = 1,2) moving in the optical potential plus the
// state-dependent dipole-dipole energy <psi|H(r2-r1)|psi>, while the internal
// pair state psi evolves under i dpsi/dt = H(r2-r1) psi.  The dynamical phase
// gamma_d(t) = -int <psi|H|psi> dt' is accumulated as part of the same
// Runge-Kutta system, so it is a fine-grid quadrature of the realized path.
//
// Everything is integrated jointly with a fixed-step classical RK4; the step
// is the largest value <= requested dt that divides the control knot spacing
// exactly, so control knots always coincide with integration nodes.

namespace aa {

struct AtomPairState {
  Eigen::Vector2d r1{0, 0}, p1{0, 0};
  Eigen::Vector2d r2{0, 0}, p2{0, 0};
  Eigen::Vector4d psi_re{Eigen::Vector4d::Zero()};
  Eigen::Vector4d psi_im{Eigen::Vector4d::Zero()};

  Eigen::Vector4cd psi() const {
    return psi_re.cast<std::complex<double>>() +
           std::complex<double>(0, 1) * psi_im.cast<std::complex<double>>();
  }
  double psi_norm2() const {
    return psi_re.squaredNorm() + psi_im.squaredNorm();
  }
};

inline AtomPairState add_scaled(const AtomPairState& y, double a,
                                const AtomPairState& d) {
  AtomPairState out;
  out.r1 = y.r1 + a * d.r1;
  out.p1 = y.p1 + a * d.p1;
  out.r2 = y.r2 + a * d.r2;
  out.p2 = y.p2 + a * d.p2;
  out.psi_re = y.psi_re + a * d.psi_re;
  out.psi_im = y.psi_im + a * d.psi_im;
  return out;
}

// Midpoint of a cubic Hermite reconstruction between two integration nodes
// spaced dt apart, given the states and their time derivatives.
inline AtomPairState hermite_midpoint(const AtomPairState& a,
                                      const AtomPairState& da,
                                      const AtomPairState& b,
                                      const AtomPairState& db, double dt) {
  AtomPairState out;
  const double c = dt / 8.0;
  out.r1 = 0.5 * (a.r1 + b.r1) + c * (da.r1 - db.r1);
  out.p1 = 0.5 * (a.p1 + b.p1) + c * (da.p1 - db.p1);
  out.r2 = 0.5 * (a.r2 + b.r2) + c * (da.r2 - db.r2);
  out.p2 = 0.5 * (a.p2 + b.p2) + c * (da.p2 - db.p2);
  out.psi_re = 0.5 * (a.psi_re + b.psi_re) + c * (da.psi_re - db.psi_re);
  out.psi_im = 0.5 * (a.psi_im + b.psi_im) + c * (da.psi_im - db.psi_im);
  return out;
}

struct SystemModel {
  DipoleInteraction interaction;
  FieldSet fields;
  double mass = 1.0;  // internal units (hbar=1, um, us)
};

struct IntegrateOptions {
  double dt = 1e-3;               // requested step, us
  bool record_propagator = false; // carry U(t) (unitarity-projected step)
  bool pin_positions = false;     // freeze the classical coordinates
  bool record_fine = true;        // keep per-step states and derivatives
  double renorm_threshold = 1e-12;
  // Called after each completed fine step with (step index, state); used by
  // the Langevin layer to apply its momentum update.  When unset the
  // integration is exactly the deterministic path.
  std::function<void(int, AtomPairState&)> post_step;
};

// The fine step actually used for a given control grid and requested dt: the
// largest value <= dt that divides the knot spacing into an integer number of
// substeps.
double effective_step(const ControlSignal& control, double dt_request);

struct TrajectoryRecord {
  double duration = 0.0;
  double dt = 0.0;     // actual fine step
  int substeps = 0;    // fine steps per control interval

  // Control-knot samples.
  std::vector<double> sample_t;
  std::vector<AtomPairState> samples;
  std::vector<double> sample_energy;    // <psi|H|psi>, rad/us
  std::vector<double> sample_gamma_d;   // radians, never wrapped

  std::optional<Eigen::Matrix4cd> propagator;

  // Fine-grid internals (filled when IntegrateOptions::record_fine).
  std::vector<AtomPairState> fine_state;
  std::vector<AtomPairState> fine_deriv;
  std::vector<double> fine_gamma_d;
  std::vector<double> fine_energy;

  double fine_time(int k) const { return k * dt; }
  int fine_count() const { return static_cast<int>(fine_state.size()); }
  const AtomPairState& initial_state() const { return samples.front(); }
  const AtomPairState& final_state() const { return samples.back(); }
  double gamma_d_final() const { return sample_gamma_d.back(); }
};

// Propagate from `initial` over the control's full horizon.  Throws
// GeometryError (with the violation time) if the atoms approach below the
// interaction guard radius, NumericError if the state stops being finite or
// the initial pair state is not normalized.
TrajectoryRecord integrate(const SystemModel& model,
                           const AtomPairState& initial,
                           const ControlSignal& control,
                           const IntegrateOptions& options);

}  // namespace aa
