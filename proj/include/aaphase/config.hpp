#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "aaphase/dynamics.hpp"
#include "aaphase/noise_mc.hpp"
#include "aaphase/optimal_control.hpp"

// Experiment description: a flat key-value text format with mandatory unit
// suffixes (`trap.sigma = 2 um`).  Values are stored exactly as declared and
// converted to internal units (hbar = 1, um, us) only through the factory
// accessors, so serialize/load round-trips are identities.  Unknown keys,
// duplicate keys, wrong unit suffixes, and out-of-range values are rejected
// with the offending line number.

namespace aa {

struct ExperimentConfig {
  int schema_version = 1;

  // physics.*
  double c3_GHz_um3 = 2.39;       // dipole-dipole strength, h GHz um^3
  std::string species = "Rb87";   // sets the atomic mass
  Eigen::Vector2d quantization_axis{0.0, 1.0};  // in-plane, normalized on use
  double guard_um = 1.0;          // minimum allowed pair separation

  // trap.*
  double mobile_depth_mK = 10.0;  // U_D
  double static_depth_mK = 4.0;   // U_S
  double sigma_um = 2.0;          // common waist
  Eigen::Vector2d static_pos_um{0.0, 0.0};  // B: static trap and atom 2
  Eigen::Vector2d start_pos_um{0.0, 19.0};  // A: mobile trap and atom 1 at t=0

  // horizon.*
  double duration_us = 30.0;
  double dt_us = 1e-3;
  int samples = 60;               // control intervals N (N+1 knots)

  // state.*
  std::string initial_state = "dd";  // channel label

  // weights.*
  double chi_r = 1e3, chi_p = 10.0, chi_psi = 1.0, chi_dy = 1.0;
  double nu_x = 1e-4, nu_y = 1e-4;
  std::string phase_target = "dynamical";   // dynamical | geometric
  std::string adjoint_pairing = "derived";  // derived | alternate

  // init.*  (initial control guess for the optimizer)
  std::string init_shape = "circle";  // circle | ellipse
  double init_radius_um = 7.0;        // circle radius
  double init_height_um = 8.0;        // ellipse reach along the pair axis
                                      // (positive dips toward the partner,
                                      //  negative bulges away from it)
  double init_width_um = 3.0;         // ellipse transverse half-width
  bool init_ccw = true;
  // Circle only: loop-center distance from the static atom along the pair
  // axis.  0 keeps the classic loop whose far point is the start position;
  // a positive value recenters the circle there and warps it radially
  // (raised-cosine bump at the start knot) so it still begins and ends at A.
  double init_distance_um = 0.0;
  // Start the mobile atom with the initial-loop velocity instead of at rest;
  // without this the sudden swing-up tends to spill the atom from the trap.
  bool init_launch = false;
  // Offset each control knot by the displacement whose trap force supplies
  // the local path acceleration (capped at the force peak), so the initial
  // guess tracks the intended loop with far less lag.
  bool init_feedforward = false;

  // optimizer.*
  int max_iters = 300;
  double grad_tol = 1e-8;
  double step0 = 1e-5;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 30;
  bool nesterov = true;
  double momentum_beta = 0.9;
  double step_growth = 1.3;

  // scan.*
  double scan_r_min_um = 4.0, scan_r_max_um = 10.0, scan_r_step_um = 0.5;
  double scan_d_min_um = 8.0, scan_d_max_um = 16.0, scan_d_step_um = 0.5;
  int scan_workers = 0;  // 0 = hardware concurrency
  // Optional scan-only objective weight overrides (absent = reuse weights.*).
  bool has_scan_chi_r = false, has_scan_chi_p = false;
  bool has_scan_chi_psi = false, has_scan_chi_dy = false;
  double scan_chi_r = 0.0, scan_chi_p = 0.0;
  double scan_chi_psi = 0.0, scan_chi_dy = 0.0;

  // noise.*
  double bath_temperature_mK = 0.1;
  double bath_lambda_per_ms = 0.05;
  int noise_realizations = 200;
  double escape_sigmas = 3.0;
  int noise_workers = 0;

  // output.*
  std::string output_prefix = "run";

  // ---- derived quantities (internal units) ----
  double mass_internal() const;           // from species
  double c3_internal() const;             // rad/us * um^3
  Eigen::Vector2d axis_unit() const;      // normalized quantization axis
  Eigen::Vector4d psi0_re() const;        // channel unit vector
  Eigen::Vector4d psi0_im() const { return Eigen::Vector4d::Zero(); }

  SystemModel make_model() const;
  AtomPairState make_initial_state() const;
  Eigen::Vector2d init_velocity() const;  // loop velocity at t = 0 (analytic)
  IntegrateOptions make_integrate_options() const;
  ObjectiveSpec make_objective() const;
  ObjectiveSpec make_scan_objective() const;  // with scan.chi_* overrides
  DescentOptions make_descent_options() const;
  ScanRequest make_scan_request() const;
  BathSpec make_bath() const;
  ControlSignal make_initial_control() const;
};

// Parse / validate.  Throws ConfigError with a line-numbered message.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in, const std::string& origin);

// Canonical text form (fixed key order, 17 significant digits).  Reparsing
// the output reproduces the config exactly.
std::string serialize_config(const ExperimentConfig& cfg);

// FNV-1a (64-bit) over the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace aa
