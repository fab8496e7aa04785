#include "aaphase/dynamics.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "aaphase/errors.hpp"

namespace aa {
namespace {

struct StageEval {
  AtomPairState d;      // time derivative of the state
  double dgamma = 0.0;  // time derivative of gamma_d = -<psi|H|psi>
  Eigen::Matrix4d H;    // interaction Hamiltonian at the stage geometry
};

StageEval rhs(const SystemModel& model, const AtomPairState& y,
              const Eigen::Vector2d& u, bool pinned) {
  StageEval out;
  const bool need_grad = !pinned;
  const GeometryEval g = model.interaction.geometry(y.r1, y.r2, need_grad);
  const auto w = model.interaction.state_weights(y.psi_re, y.psi_im);
  const double energy = model.interaction.energy(g, w);
  out.H = model.interaction.hamiltonian(g);
  out.dgamma = -energy;

  // i dpsi/dt = H psi  ->  d(re)/dt = H im,  d(im)/dt = -H re.
  out.d.psi_re = out.H * y.psi_im;
  out.d.psi_im = -(out.H * y.psi_re);

  if (pinned) {
    out.d.r1.setZero();
    out.d.p1.setZero();
    out.d.r2.setZero();
    out.d.p2.setZero();
    return out;
  }

  const Eigen::Vector2d grho = model.interaction.energy_grad_rho(g, w);
  out.d.r1 = y.p1 / model.mass;
  out.d.r2 = y.p2 / model.mass;
  out.d.p1 = grho - model.fields.gradient(y.r1, u);
  out.d.p2 = -grho - model.fields.gradient(y.r2, u);
  return out;
}

bool finite(const AtomPairState& y) {
  return y.r1.allFinite() && y.p1.allFinite() && y.r2.allFinite() &&
         y.p2.allFinite() && y.psi_re.allFinite() && y.psi_im.allFinite();
}

Eigen::Matrix4cd minus_iH(const Eigen::Matrix4d& H) {
  return std::complex<double>(0.0, -1.0) * H.cast<std::complex<double>>();
}

}  // namespace

double effective_step(const ControlSignal& control, double dt_request) {
  if (!(dt_request > 0.0))
    throw std::invalid_argument("effective_step: dt must be > 0");
  const double h = control.knot_spacing();
  const int sub = std::max(1, static_cast<int>(std::llround(h / dt_request)));
  return h / sub;
}

TrajectoryRecord integrate(const SystemModel& model,
                           const AtomPairState& initial,
                           const ControlSignal& control,
                           const IntegrateOptions& options) {
  if (!(options.dt > 0.0))
    throw std::invalid_argument("integrate: dt must be > 0");
  if (std::abs(initial.psi_norm2() - 1.0) > 1e-9)
    throw NumericError("integrate: initial pair state is not normalized");

  const int n_ctrl = control.intervals();
  const double h = control.knot_spacing();
  const int sub = std::max(1, static_cast<int>(std::llround(h / options.dt)));
  const double dt = h / sub;
  const int n_fine = n_ctrl * sub;

  TrajectoryRecord rec;
  rec.duration = control.duration();
  rec.dt = dt;
  rec.substeps = sub;
  rec.sample_t.reserve(n_ctrl + 1);
  rec.samples.reserve(n_ctrl + 1);
  rec.sample_energy.reserve(n_ctrl + 1);
  rec.sample_gamma_d.reserve(n_ctrl + 1);
  if (options.record_fine) {
    rec.fine_state.reserve(n_fine + 1);
    rec.fine_deriv.reserve(n_fine + 1);
    rec.fine_gamma_d.reserve(n_fine + 1);
    rec.fine_energy.reserve(n_fine + 1);
  }

  Eigen::Matrix4cd U = Eigen::Matrix4cd::Identity();
  AtomPairState y = initial;
  double gamma = 0.0;

  const auto record_node = [&](int k, const StageEval& k1) {
    if (options.record_fine) {
      rec.fine_state.push_back(y);
      rec.fine_deriv.push_back(k1.d);
      rec.fine_gamma_d.push_back(gamma);
      rec.fine_energy.push_back(-k1.dgamma);
    }
    if (k % sub == 0) {
      rec.sample_t.push_back(k * dt);
      rec.samples.push_back(y);
      rec.sample_energy.push_back(-k1.dgamma);
      rec.sample_gamma_d.push_back(gamma);
    }
  };

  for (int k = 0; k < n_fine; ++k) {
    const double t = k * dt;
    try {
      const StageEval k1 = rhs(model, y, control.value(t), options.pin_positions);
      record_node(k, k1);

      const Eigen::Vector2d u_mid = control.value(t + 0.5 * dt);
      const Eigen::Vector2d u_end = control.value(t + dt);
      const AtomPairState y2 = add_scaled(y, 0.5 * dt, k1.d);
      const StageEval k2 = rhs(model, y2, u_mid, options.pin_positions);
      const AtomPairState y3 = add_scaled(y, 0.5 * dt, k2.d);
      const StageEval k3 = rhs(model, y3, u_mid, options.pin_positions);
      const AtomPairState y4 = add_scaled(y, dt, k3.d);
      const StageEval k4 = rhs(model, y4, u_end, options.pin_positions);

      AtomPairState incr = k1.d;
      incr = add_scaled(incr, 2.0, k2.d);
      incr = add_scaled(incr, 2.0, k3.d);
      incr = add_scaled(incr, 1.0, k4.d);
      AtomPairState ynext = add_scaled(y, dt / 6.0, incr);
      gamma += dt / 6.0 *
               (k1.dgamma + 2.0 * k2.dgamma + 2.0 * k3.dgamma + k4.dgamma);

      if (options.record_propagator) {
        // Assemble the per-step propagator from the same four stage
        // Hamiltonians, then nudge it onto the unitary group (one polar
        // iteration); apply the identical matrix to both psi and U so the
        // recorded propagator reproduces psi(T) to rounding.
        const Eigen::Matrix4cd I = Eigen::Matrix4cd::Identity();
        const Eigen::Matrix4cd K1 = minus_iH(k1.H);
        const Eigen::Matrix4cd K2 = minus_iH(k2.H) * (I + 0.5 * dt * K1);
        const Eigen::Matrix4cd K3 = minus_iH(k3.H) * (I + 0.5 * dt * K2);
        const Eigen::Matrix4cd K4 = minus_iH(k4.H) * (I + dt * K3);
        Eigen::Matrix4cd S =
            I + (dt / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
        S = 0.5 * (S + S.adjoint().inverse().eval());
        const Eigen::Vector4cd psi_new = S * y.psi();
        ynext.psi_re = psi_new.real();
        ynext.psi_im = psi_new.imag();
        U = (S * U).eval();
      } else {
        const double n2 = ynext.psi_norm2();
        if (std::abs(n2 - 1.0) > options.renorm_threshold) {
          const double s = 1.0 / std::sqrt(n2);
          ynext.psi_re *= s;
          ynext.psi_im *= s;
        }
      }
      y = ynext;
      if (options.post_step) options.post_step(k, y);
    } catch (const GeometryError& e) {
      std::ostringstream msg;
      msg << e.what() << " (t = " << t << " us)";
      throw GeometryError(msg.str(), t);
    }
    if ((k + 1) % sub == 0 && !finite(y))
      throw NumericError("integrate: state is no longer finite at t = " +
                         std::to_string((k + 1) * dt) + " us");
  }

  // Terminal node.
  try {
    const StageEval kT = rhs(model, y, control.value(rec.duration),
                             options.pin_positions);
    record_node(n_fine, kT);
  } catch (const GeometryError& e) {
    std::ostringstream msg;
    msg << e.what() << " (t = " << rec.duration << " us)";
    throw GeometryError(msg.str(), rec.duration);
  }
  if (options.record_propagator) rec.propagator = U;
  return rec;
}

}  // namespace aa
