#include "aaphase/optimal_control.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <thread>

#include "aaphase/errors.hpp"

namespace aa {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double angle_penalty(double gamma, double chi) {
  // chi |e^{i gamma/2} - 1|^2 = 2 chi (1 - cos(gamma/2)); 4 pi periodic.
  return 2.0 * chi * (1.0 - std::cos(0.5 * gamma));
}

// ---- adjoint (costate) system --------------------------------------------

struct AdjState {
  Eigen::Vector2d r1h{0, 0}, p1h{0, 0}, r2h{0, 0}, p2h{0, 0};
  Eigen::Vector4d phi_re{Eigen::Vector4d::Zero()};
  Eigen::Vector4d phi_im{Eigen::Vector4d::Zero()};
};

AdjState adj_add_scaled(const AdjState& x, double a, const AdjState& d) {
  AdjState out;
  out.r1h = x.r1h + a * d.r1h;
  out.p1h = x.p1h + a * d.p1h;
  out.r2h = x.r2h + a * d.r2h;
  out.p2h = x.p2h + a * d.p2h;
  out.phi_re = x.phi_re + a * d.phi_re;
  out.phi_im = x.phi_im + a * d.phi_im;
  return out;
}

// Time derivative of the costates.  Forward-time convention; the caller
// integrates this backward.  The position costates r^h are sourced by the
// optical curvature and by the state-dependent interaction through three
// channels: the energy Hessian (through rho), the cross term
// 2 Re(phi^dag dH psi), and the accumulated-phase sensitivity lambda_gamma.
AdjState adjoint_rhs(const SystemModel& model, const AtomPairState& y,
                     const Eigen::Vector2d& u, const AdjState& x,
                     double lambda_gamma, bool alternate_pairing) {
  const GeometryEval g = model.interaction.geometry(y.r1, y.r2, true, true);
  const Eigen::Matrix4d H = model.interaction.hamiltonian(g);
  const auto w = model.interaction.state_weights(y.psi_re, y.psi_im);
  const auto z =
      model.interaction.cross_weights(x.phi_re, x.phi_im, y.psi_re, y.psi_im);
  const Eigen::Matrix2d K = model.interaction.energy_hess_rho(g, w);
  const Eigen::Vector2d egw = model.interaction.energy_grad_rho(g, w);
  const Eigen::Vector2d egz = model.interaction.energy_grad_rho(g, z);
  const Eigen::Vector2d dK = x.r2h - x.r1h;
  const Eigen::Vector2d dphi =
      alternate_pairing ? Eigen::Vector2d(x.p2h - x.p1h) : dK;
  const Eigen::Matrix2d A1 = model.fields.hessian(y.r1, u);
  const Eigen::Matrix2d A2 = model.fields.hessian(y.r2, u);

  AdjState d;
  d.r1h = -x.p1h / model.mass;
  d.r2h = -x.p2h / model.mass;
  d.p1h = A1 * x.r1h - K * dK + egz + lambda_gamma * egw;
  d.p2h = A2 * x.r2h + K * dK - egz - lambda_gamma * egw;

  // phi' = -i H phi - i (lambda H - (dphi . dH/drho)) psi
  const Eigen::Matrix4d G = model.interaction.rho_derivative(g, dphi);
  d.phi_re = H * x.phi_im + lambda_gamma * (H * y.psi_im) - G * y.psi_im;
  d.phi_im = -(H * x.phi_re) - lambda_gamma * (H * y.psi_re) + G * y.psi_re;
  return d;
}

// dF/d(conj psi) for the product-fidelity reward, factors held fixed
// (envelope form).  Near the branch crossing |psi_dd| ~ |psi_pf| the envelope
// direction is ill-conditioned, so fall back to symmetric differences of the
// closed-form value.
Eigen::Vector4cd product_term_gradient(const Eigen::Vector4cd& psi) {
  const auto value = [](const Eigen::Vector4cd& p) {
    return std::max(std::abs(p[0]),
                    std::sqrt(std::norm(p[1]) + std::norm(p[2]) +
                              std::norm(p[3])));
  };
  const double s_dd = std::abs(psi[0]);
  const double s_pf =
      std::sqrt(std::norm(psi[1]) + std::norm(psi[2]) + std::norm(psi[3]));
  if (std::abs(s_dd - s_pf) >= 1e-6) {
    const SeparabilityResult sep = separability(psi);
    Eigen::Vector4cd v;
    v << sep.eta1[0] * sep.eta2[0], sep.eta1[1] * sep.eta2[1],
        sep.eta1[1] * sep.eta2[2], sep.eta1[1] * sep.eta2[3];
    const std::complex<double> cF = v.dot(psi);  // v^dag psi
    return (cF / (2.0 * std::abs(cF))) * v;
  }
  const double eps = 1e-7;
  Eigen::Vector4cd out;
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4cd p = psi;
    p[i] = psi[i] + eps;
    const double fp = value(p);
    p[i] = psi[i] - eps;
    const double fm = value(p);
    p[i] = psi[i] + std::complex<double>(0, eps);
    const double fip = value(p);
    p[i] = psi[i] - std::complex<double>(0, eps);
    const double fim = value(p);
    out[i] = 0.5 * std::complex<double>((fp - fm) / (2.0 * eps),
                                        (fip - fim) / (2.0 * eps));
  }
  return out;
}

// Scan-cell score for one revolution with the traveling atom riding the
// circle exactly and the partner held at `origin`: the trajectory is a
// geometric input here, so only the internal state evolves and the
// loop-closure terms vanish by construction.  The cell score is the state
// goals (return, phase, separability) plus the smoothness cost of the
// circular loop itself.  The positions fed to the Hamiltonian come from the
// exact circle, not the spline, so the score is a pure function of (r, d).
ObjectiveBreakdown ride_circle_objective(
    const SystemModel& model, const Eigen::Vector2d& center, double radius,
    const Eigen::Vector2d& uhat, bool ccw, const Eigen::Vector2d& origin,
    const Eigen::Vector4d& psi0_re, const Eigen::Vector4d& psi0_im,
    double duration, const ControlSignal& loop, const ObjectiveSpec& spec,
    double dt_request) {
  const double sgn = ccw ? 1.0 : -1.0;
  const auto pos = [&](double t) {
    const double a = sgn * 2.0 * M_PI * t / duration;
    const double cs = std::cos(a), sn = std::sin(a);
    return Eigen::Vector2d(center.x() +
                               radius * (cs * uhat.x() - sn * uhat.y()),
                           center.y() +
                               radius * (sn * uhat.x() + cs * uhat.y()));
  };

  struct Slope {
    Eigen::Vector4d re, im;
    double gd;
  };
  const auto rhs = [&](double t, const Eigen::Vector4d& re,
                       const Eigen::Vector4d& im) {
    const Eigen::Matrix4d H = model.interaction.hamiltonian(pos(t), origin);
    Slope d;
    d.re = H * im;
    d.im = -(H * re);
    d.gd = -(re.dot(H * re) + im.dot(H * im));
    return d;
  };

  const double h = effective_step(loop, dt_request);
  const int nstep = static_cast<int>(std::llround(duration / h));
  Eigen::Vector4d re = psi0_re, im = psi0_im;
  double gd = 0.0;
  for (int k = 0; k < nstep; ++k) {
    const double t = k * h;
    const Slope k1 = rhs(t, re, im);
    const Slope k2 =
        rhs(t + 0.5 * h, re + 0.5 * h * k1.re, im + 0.5 * h * k1.im);
    const Slope k3 =
        rhs(t + 0.5 * h, re + 0.5 * h * k2.re, im + 0.5 * h * k2.im);
    const Slope k4 = rhs(t + h, re + h * k3.re, im + h * k3.im);
    re += (h / 6.0) * (k1.re + 2.0 * k2.re + 2.0 * k3.re + k4.re);
    im += (h / 6.0) * (k1.im + 2.0 * k2.im + 2.0 * k3.im + k4.im);
    gd += (h / 6.0) * (k1.gd + 2.0 * k2.gd + 2.0 * k3.gd + k4.gd);
    if (!re.allFinite() || !im.allFinite())
      throw NumericError("scan cell: state became non-finite");
    const double n2 = re.squaredNorm() + im.squaredNorm();
    if (std::abs(n2 - 1.0) > 1e-12) {
      const double s = 1.0 / std::sqrt(n2);
      re *= s;
      im *= s;
    }
  }

  const std::complex<double> iu(0.0, 1.0);
  const Eigen::Vector4cd psi0 =
      psi0_re.cast<std::complex<double>>() +
      iu * psi0_im.cast<std::complex<double>>();
  const Eigen::Vector4cd psiT =
      re.cast<std::complex<double>>() + iu * im.cast<std::complex<double>>();

  ObjectiveBreakdown b;
  const std::complex<double> c = psi0.dot(psiT);
  b.overlap_abs = std::abs(c);
  b.state_return = -spec.chi_psi * std::norm(c);
  b.gamma_d_rad = gd;
  b.gamma_g_rad = (b.overlap_abs >= 1e-6)
                      ? wrap_radians(std::arg(c) - gd)
                      : std::numeric_limits<double>::quiet_NaN();
  double gamma = b.gamma_d_rad;
  if (spec.angle == PhaseAngle::geometric) {
    if (!(b.overlap_abs >= 1e-6))
      throw NumericError("scan cell: geometric phase is undefined");
    gamma = b.gamma_g_rad;
  }
  b.phase_penalty = angle_penalty(gamma, spec.chi_dy);
  const SeparabilityResult sep = separability(psiT.normalized());
  b.fidelity = sep.fidelity;
  b.product_reward = -sep.fidelity;
  b.smoothness = loop.smoothness_cost(spec.nu);
  b.total = b.state_return + b.phase_penalty + b.product_reward + b.smoothness;
  return b;
}

}  // namespace

ObjectiveEval evaluate_objective(const SystemModel& model,
                                 const AtomPairState& initial,
                                 const ControlSignal& control,
                                 const ObjectiveSpec& spec,
                                 const IntegrateOptions& opts) {
  ObjectiveEval out{integrate(model, initial, control, opts), {}};
  const AtomPairState& y0 = out.record.initial_state();
  const AtomPairState& yT = out.record.final_state();
  ObjectiveBreakdown& b = out.parts;

  b.closure_r = 0.5 * spec.chi_r *
                ((yT.r1 - y0.r1).squaredNorm() + (yT.r2 - y0.r2).squaredNorm());
  b.closure_p = 0.5 * spec.chi_p * (yT.p1.squaredNorm() + yT.p2.squaredNorm());

  const std::complex<double> c = y0.psi().dot(yT.psi());
  b.overlap_abs = std::abs(c);
  b.state_return = -spec.chi_psi * std::norm(c);
  b.gamma_d_rad = out.record.gamma_d_final();
  b.gamma_g_rad = (b.overlap_abs >= 1e-6)
                      ? wrap_radians(std::arg(c) - b.gamma_d_rad)
                      : std::numeric_limits<double>::quiet_NaN();

  double gamma = b.gamma_d_rad;
  if (spec.angle == PhaseAngle::geometric) {
    if (!(b.overlap_abs >= 1e-6))
      throw NumericError(
          "objective: geometric phase is undefined (terminal overlap is "
          "degenerate)");
    gamma = b.gamma_g_rad;
  }
  b.phase_penalty = angle_penalty(gamma, spec.chi_dy);

  const SeparabilityResult sep = separability(yT.psi().normalized());
  b.fidelity = sep.fidelity;
  b.product_reward = -sep.fidelity;
  b.smoothness = control.smoothness_cost(spec.nu);
  b.total = b.closure_r + b.closure_p + b.state_return + b.phase_penalty +
            b.product_reward + b.smoothness;
  return out;
}

GradientEval objective_gradient(const SystemModel& model,
                                const AtomPairState& initial,
                                const ControlSignal& control,
                                const ObjectiveSpec& spec,
                                const IntegrateOptions& opts) {
  IntegrateOptions fopts = opts;
  fopts.record_fine = true;
  fopts.record_propagator = false;

  GradientEval out{evaluate_objective(model, initial, control, spec, fopts),
                   Eigen::Matrix2Xd(), 0.0};
  const TrajectoryRecord& rec = out.eval.record;
  const int M = rec.fine_count() - 1;
  const double dt = rec.dt;
  const AtomPairState& y0 = rec.initial_state();
  const AtomPairState& yT = rec.final_state();
  const bool alternate = (spec.convention == AdjointConvention::alternate);

  // Sensitivity of the objective to the accumulated phase gamma_d(T).
  double lambda_gamma;
  if (spec.angle == PhaseAngle::dynamical)
    lambda_gamma = spec.chi_dy * std::sin(0.5 * rec.gamma_d_final());
  else
    lambda_gamma = -spec.chi_dy * std::sin(0.5 * out.eval.parts.gamma_g_rad);

  // Terminal costates.
  AdjState x;
  x.p1h = spec.chi_r * (y0.r1 - yT.r1);
  x.p2h = spec.chi_r * (y0.r2 - yT.r2);
  const double psign = alternate ? 1.0 : -1.0;
  x.r1h = psign * spec.chi_p * yT.p1;
  x.r2h = psign * spec.chi_p * yT.p2;

  const std::complex<double> c = y0.psi().dot(yT.psi());
  Eigen::Vector4cd phiT =
      std::complex<double>(0, 1) *
      (spec.chi_psi * c * y0.psi() +
       product_term_gradient(yT.psi().normalized()));
  if (spec.angle == PhaseAngle::geometric) {
    // The wrapped-angle penalty also depends on psi(T) through arg c.
    phiT += (spec.chi_dy * std::sin(0.5 * out.eval.parts.gamma_g_rad) /
             (2.0 * std::conj(c))) *
            y0.psi();
  }
  x.phi_re = phiT.real();
  x.phi_im = phiT.imag();

  // Backward RK4 sweep over the stored fine grid; forward data at step
  // midpoints comes from the cubic Hermite reconstruction.
  Eigen::Matrix2Xd density(2, M + 1);
  const auto density_at = [&](const AtomPairState& y, double t,
                              const AdjState& s) -> Eigen::Vector2d {
    const Eigen::Vector2d u = control.value(t);
    const Eigen::Vector2d m1 = alternate ? s.p1h : s.r1h;
    const Eigen::Vector2d m2 = alternate ? s.p2h : s.r2h;
    return model.fields.mixed_hessian(y.r1, u).transpose() * m1 +
           model.fields.mixed_hessian(y.r2, u).transpose() * m2;
  };

  density.col(M) = density_at(rec.fine_state[static_cast<size_t>(M)],
                              rec.fine_time(M), x);
  for (int k = M; k >= 1; --k) {
    const AtomPairState& ya = rec.fine_state[static_cast<size_t>(k)];
    const AtomPairState& yb = rec.fine_state[static_cast<size_t>(k - 1)];
    const AtomPairState ym =
        hermite_midpoint(yb, rec.fine_deriv[static_cast<size_t>(k - 1)], ya,
                         rec.fine_deriv[static_cast<size_t>(k)], dt);
    const double ta = rec.fine_time(k);
    const double tb = rec.fine_time(k - 1);
    const double tm = 0.5 * (ta + tb);
    const Eigen::Vector2d ua = control.value(ta);
    const Eigen::Vector2d um = control.value(tm);
    const Eigen::Vector2d ub = control.value(tb);

    const AdjState k1 = adjoint_rhs(model, ya, ua, x, lambda_gamma, alternate);
    const AdjState x2 = adj_add_scaled(x, -0.5 * dt, k1);
    const AdjState k2 = adjoint_rhs(model, ym, um, x2, lambda_gamma, alternate);
    const AdjState x3 = adj_add_scaled(x, -0.5 * dt, k2);
    const AdjState k3 = adjoint_rhs(model, ym, um, x3, lambda_gamma, alternate);
    const AdjState x4 = adj_add_scaled(x, -dt, k3);
    const AdjState k4 = adjoint_rhs(model, yb, ub, x4, lambda_gamma, alternate);

    AdjState incr = k1;
    incr = adj_add_scaled(incr, 2.0, k2);
    incr = adj_add_scaled(incr, 2.0, k3);
    incr = adj_add_scaled(incr, 1.0, k4);
    x = adj_add_scaled(x, -dt / 6.0, incr);
    density.col(k - 1) = density_at(yb, tb, x);
  }

  // Project the per-time sensitivity onto the sample basis (trapezoid in
  // time, exact spline adjoint), add the exact smoothness gradient, and pin
  // the loop endpoints.
  std::vector<double> times(static_cast<size_t>(M) + 1);
  Eigen::Matrix2Xd coef(2, M + 1);
  for (int m = 0; m <= M; ++m) {
    times[static_cast<size_t>(m)] = rec.fine_time(m);
    const double wq = (m == 0 || m == M) ? 0.5 * dt : dt;
    coef.col(m) = wq * density.col(m);
  }
  out.gradient = control.evaluation_adjoint(times, coef) +
                 control.smoothness_gradient(spec.nu);
  const int N = control.intervals();
  out.gradient.col(0).setZero();
  out.gradient.col(N).setZero();
  out.grad_norm = 0.0;
  for (int kcol = 1; kcol < N; ++kcol)
    out.grad_norm = std::max(
        out.grad_norm, out.gradient.col(kcol).cwiseAbs().maxCoeff());
  return out;
}

DescentResult descend(const SystemModel& model, const AtomPairState& initial,
                      const ControlSignal& control0, const ObjectiveSpec& spec,
                      const IntegrateOptions& opts, const DescentOptions& dopts,
                      const IterationCallback& on_iteration) {
  ControlSignal u = control0;
  const int N = u.intervals();

  IntegrateOptions probe = opts;
  probe.record_fine = false;
  probe.record_propagator = false;

  const auto frob2_free = [&](const Eigen::Matrix2Xd& g) {
    double s = 0.0;
    for (int k = 1; k < N; ++k) s += g.col(k).squaredNorm();
    return s;
  };
  const auto objective_of = [&](const ControlSignal& ctl) {
    try {
      return evaluate_objective(model, initial, ctl, spec, probe).parts.total;
    } catch (const NumericError&) {
      return kInf;
    }
  };

  DescentResult out;
  double J_u = objective_of(u);
  if (!std::isfinite(J_u))
    throw NumericError("descend: initial control is infeasible");

  Eigen::Matrix2Xd vel = Eigen::Matrix2Xd::Zero(2, N + 1);
  bool has_vel = false;
  double step = dopts.step0;

  for (int iter = 1; iter <= dopts.max_iters; ++iter) {
    bool restarted = false;

    // Gradient at the (possibly momentum-shifted) probe point.
    Eigen::Matrix2Xd p_samples = u.samples();
    bool at_lookahead = false;
    if (dopts.nesterov && has_vel) {
      p_samples += dopts.momentum_beta * vel;
      at_lookahead = true;
    }
    GradientEval G;
    try {
      G = objective_gradient(model, initial,
                             ControlSignal(u.duration(), p_samples), spec,
                             opts);
    } catch (const NumericError&) {
      if (!at_lookahead) throw;
      // Lookahead left the feasible region; restart from the iterate.
      restarted = true;
      has_vel = false;
      vel.setZero();
      p_samples = u.samples();
      at_lookahead = false;
      G = objective_gradient(model, initial, u, spec, opts);
    }

    if (G.grad_norm < dopts.grad_tol) {
      out.converged = true;
      out.stop_reason = "gradient tolerance reached";
      break;
    }

    // Armijo backtracking, monotone with respect to the accepted iterate.
    const auto line_search = [&](const Eigen::Matrix2Xd& base,
                                 const Eigen::Matrix2Xd& grad, double g2,
                                 double* J_out, Eigen::Matrix2Xd* accepted,
                                 double* s_out, int* bt_out) {
      double s = step;
      for (int bt = 0; bt <= dopts.max_backtracks; ++bt) {
        Eigen::Matrix2Xd trial = base - s * grad;
        const double J_t = objective_of(ControlSignal(u.duration(), trial));
        if (J_t <= J_u - dopts.armijo_c * s * g2) {
          *J_out = J_t;
          *accepted = std::move(trial);
          *s_out = s;
          *bt_out = bt;
          return true;
        }
        s *= dopts.backtrack;
      }
      return false;
    };

    double J_new = 0.0, s_used = 0.0;
    int bts = 0;
    Eigen::Matrix2Xd u_new;
    bool ok = line_search(p_samples, G.gradient, frob2_free(G.gradient),
                          &J_new, &u_new, &s_used, &bts);
    if (!ok && at_lookahead) {
      restarted = true;
      has_vel = false;
      vel.setZero();
      G = objective_gradient(model, initial, u, spec, opts);
      ok = line_search(u.samples(), G.gradient, frob2_free(G.gradient), &J_new,
                       &u_new, &s_used, &bts);
    }
    if (!ok) {
      out.stop_reason = "line search stalled";
      break;
    }

    vel = u_new - u.samples();
    has_vel = dopts.nesterov;
    u.set_samples(u_new);
    J_u = J_new;
    step = s_used * dopts.step_growth;

    IterationInfo info;
    info.iteration = iter;
    info.J = J_new;
    info.grad_norm = G.grad_norm;
    info.step = s_used;
    info.backtracks = bts;
    info.restarted = restarted;
    info.parts = G.eval.parts;
    out.history.push_back(info);
    if (on_iteration) on_iteration(info, u.samples());
  }

  if (out.stop_reason.empty()) out.stop_reason = "max iterations";
  out.samples = u.samples();
  return out;
}

ScanResult circle_scan(const SystemModel& model, const Eigen::Vector2d& origin,
                       const Eigen::Vector2d& axis_dir,
                       const Eigen::Vector4d& psi0_re,
                       const Eigen::Vector4d& psi0_im, double duration,
                       int n_ctrl, const ObjectiveSpec& spec,
                       const IntegrateOptions& opts, const ScanRequest& req) {
  const auto grid = [](double lo, double hi, double stepv) {
    if (!(stepv > 0.0) || hi < lo)
      throw std::invalid_argument("circle_scan: bad grid bounds");
    const int n = static_cast<int>(std::llround((hi - lo) / stepv)) + 1;
    if (std::abs(lo + (n - 1) * stepv - hi) > 1e-6 * stepv)
      throw std::invalid_argument("circle_scan: step does not divide range");
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = lo + i * stepv;
    return v;
  };

  ScanResult out;
  out.radii = grid(req.r_min, req.r_max, req.r_step);
  out.distances = grid(req.d_min, req.d_max, req.d_step);
  const int nr = static_cast<int>(out.radii.size());
  const int nd = static_cast<int>(out.distances.size());
  const int total = nr * nd;
  out.cells.resize(static_cast<size_t>(total));

  const double axis_norm = axis_dir.norm();
  if (!(axis_norm > 1e-12))
    throw std::invalid_argument("circle_scan: zero axis direction");
  const Eigen::Vector2d uhat = axis_dir / axis_norm;

  IntegrateOptions copts = opts;
  copts.record_fine = false;
  copts.record_propagator = false;

  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= total) return;
      const int ir = idx / nd;
      const int id = idx % nd;
      ScanCell cell;
      cell.radius = out.radii[static_cast<size_t>(ir)];
      cell.distance = out.distances[static_cast<size_t>(id)];
      cell.feasible = false;
      cell.J = kInf;
      if (cell.distance - cell.radius >= model.interaction.guard_radius()) {
        try {
          const Eigen::Vector2d C = origin + cell.distance * uhat;
          ControlSignal ctl(duration,
                            circle_loop_samples(C, cell.radius, uhat, req.ccw,
                                                n_ctrl));
          const ObjectiveBreakdown b = ride_circle_objective(
              model, C, cell.radius, uhat, req.ccw, origin, psi0_re, psi0_im,
              duration, ctl, spec, copts.dt);
          if (std::isfinite(b.total)) {
            cell.feasible = true;
            cell.J = b.total;
            cell.parts = b;
          }
        } catch (const NumericError&) {
          // guard hit or diverged: leave infeasible
        }
      }
      out.cells[static_cast<size_t>(idx)] = cell;
    }
  };

  int n_workers = req.workers > 0
                      ? req.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_workers < 1) n_workers = 1;
  if (n_workers > total) n_workers = total;
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  out.best = -1;
  double best_J = kInf;
  for (int i = 0; i < total; ++i) {
    const ScanCell& cell = out.cells[static_cast<size_t>(i)];
    if (cell.feasible && cell.J < best_J) {
      best_J = cell.J;
      out.best = i;
    }
  }
  return out;
}

}  // namespace aa
