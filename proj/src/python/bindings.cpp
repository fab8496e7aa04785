#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "aaphase/angular.hpp"
#include "aaphase/config.hpp"
#include "aaphase/constants.hpp"
#include "aaphase/dynamics.hpp"
#include "aaphase/errors.hpp"
#include "aaphase/noise_mc.hpp"
#include "aaphase/optimal_control.hpp"
#include "aaphase/phase_analysis.hpp"

namespace py = pybind11;

namespace {

Eigen::MatrixXd stack2(const std::vector<aa::AtomPairState>& s,
                       Eigen::Vector2d aa::AtomPairState::*m) {
  Eigen::MatrixXd out(static_cast<int>(s.size()), 2);
  for (size_t i = 0; i < s.size(); ++i)
    out.row(static_cast<int>(i)) = (s[i].*m).transpose();
  return out;
}

aa::ControlSignal control_of(const aa::ExperimentConfig& cfg,
                             const Eigen::Matrix2Xd& samples) {
  return aa::ControlSignal(cfg.duration_us, samples);
}

}  // namespace

PYBIND11_MODULE(_aaphase, m) {
  m.doc() =
      "Dipole-coupled Rydberg pair under moving tweezers: joint "
      "classical/quantum propagation, geometric-phase analysis, and "
      "adjoint-based loop optimization.";

  py::register_exception<aa::ConfigError>(m, "ConfigError");
  py::register_exception<aa::NumericError>(m, "NumericError");
  py::register_exception<aa::IoError>(m, "IoError");

  // -- angular algebra ---------------------------------------------------
  m.def("wigner3j", &aa::wigner3j, py::arg("j1"), py::arg("j2"), py::arg("j3"),
        py::arg("m1"), py::arg("m2"), py::arg("m3"),
        "Wigner 3-j symbol for half-integer arguments (exact rational "
        "evaluation).");
  m.def("dipole_element", &aa::dipole_element, py::arg("j_bra"),
        py::arg("m_bra"), py::arg("q"), py::arg("j_ket"), py::arg("m_ket"),
        "Reduced-units spherical dipole matrix element <j_bra m_bra|d_q|j_ket "
        "m_ket>.");

  // -- units -------------------------------------------------------------
  auto units = m.def_submodule("units", "internal-unit conversions");
  units.attr("mK_to_radus") = aa::units::mK_to_radus;
  units.attr("GHzum3_to_internal") = aa::units::GHzum3_to_internal;
  units.attr("rb87_mass_internal") = aa::units::rb87_mass_internal;
  units.attr("deg_per_rad") = aa::units::deg_per_rad;
  units.def("trap_frequency", &aa::units::trap_frequency, py::arg("depth_mK"),
            py::arg("sigma_um"),
            "Small-oscillation angular frequency (rad/us) of a Gaussian trap.");

  // -- configuration -----------------------------------------------------
  py::class_<aa::ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("c3_GHz_um3", &aa::ExperimentConfig::c3_GHz_um3)
      .def_readwrite("species", &aa::ExperimentConfig::species)
      .def_readwrite("quantization_axis",
                     &aa::ExperimentConfig::quantization_axis)
      .def_readwrite("guard_um", &aa::ExperimentConfig::guard_um)
      .def_readwrite("mobile_depth_mK", &aa::ExperimentConfig::mobile_depth_mK)
      .def_readwrite("static_depth_mK", &aa::ExperimentConfig::static_depth_mK)
      .def_readwrite("sigma_um", &aa::ExperimentConfig::sigma_um)
      .def_readwrite("static_pos_um", &aa::ExperimentConfig::static_pos_um)
      .def_readwrite("start_pos_um", &aa::ExperimentConfig::start_pos_um)
      .def_readwrite("duration_us", &aa::ExperimentConfig::duration_us)
      .def_readwrite("dt_us", &aa::ExperimentConfig::dt_us)
      .def_readwrite("samples", &aa::ExperimentConfig::samples)
      .def_readwrite("initial_state", &aa::ExperimentConfig::initial_state)
      .def_readwrite("chi_r", &aa::ExperimentConfig::chi_r)
      .def_readwrite("chi_p", &aa::ExperimentConfig::chi_p)
      .def_readwrite("chi_psi", &aa::ExperimentConfig::chi_psi)
      .def_readwrite("chi_dy", &aa::ExperimentConfig::chi_dy)
      .def_readwrite("nu_x", &aa::ExperimentConfig::nu_x)
      .def_readwrite("nu_y", &aa::ExperimentConfig::nu_y)
      .def_readwrite("phase_target", &aa::ExperimentConfig::phase_target)
      .def_readwrite("adjoint_pairing", &aa::ExperimentConfig::adjoint_pairing)
      .def_readwrite("init_shape", &aa::ExperimentConfig::init_shape)
      .def_readwrite("init_radius_um", &aa::ExperimentConfig::init_radius_um)
      .def_readwrite("init_height_um", &aa::ExperimentConfig::init_height_um)
      .def_readwrite("init_width_um", &aa::ExperimentConfig::init_width_um)
      .def_readwrite("init_ccw", &aa::ExperimentConfig::init_ccw)
      .def_readwrite("init_distance_um", &aa::ExperimentConfig::init_distance_um)
      .def_readwrite("init_launch", &aa::ExperimentConfig::init_launch)
      .def_readwrite("init_feedforward", &aa::ExperimentConfig::init_feedforward)
      .def_readwrite("max_iters", &aa::ExperimentConfig::max_iters)
      .def_readwrite("grad_tol", &aa::ExperimentConfig::grad_tol)
      .def_readwrite("step0", &aa::ExperimentConfig::step0)
      .def_readwrite("noise_realizations",
                     &aa::ExperimentConfig::noise_realizations)
      .def_readwrite("noise_workers", &aa::ExperimentConfig::noise_workers)
      .def_readwrite("bath_temperature_mK",
                     &aa::ExperimentConfig::bath_temperature_mK)
      .def_readwrite("bath_lambda_per_ms",
                     &aa::ExperimentConfig::bath_lambda_per_ms)
      .def_readwrite("output_prefix", &aa::ExperimentConfig::output_prefix)
      .def("mass_internal", &aa::ExperimentConfig::mass_internal)
      .def("c3_internal", &aa::ExperimentConfig::c3_internal)
      .def("serialize",
           [](const aa::ExperimentConfig& c) { return aa::serialize_config(c); })
      .def("hash",
           [](const aa::ExperimentConfig& c) { return aa::config_hash(c); });

  m.def("load_config", &aa::load_config, py::arg("path"));
  m.def(
      "parse_config",
      [](const std::string& text) {
        std::istringstream in(text);
        return aa::parse_config(in, "<string>");
      },
      py::arg("text"), "Parse a config document from a string.");

  // -- propagation -------------------------------------------------------
  py::class_<aa::TrajectoryRecord>(m, "TrajectoryRecord")
      .def_readonly("duration", &aa::TrajectoryRecord::duration)
      .def_readonly("dt", &aa::TrajectoryRecord::dt)
      .def_property_readonly(
          "t", [](const aa::TrajectoryRecord& r) { return r.sample_t; })
      .def_property_readonly(
          "r1",
          [](const aa::TrajectoryRecord& r) {
            return stack2(r.samples, &aa::AtomPairState::r1);
          })
      .def_property_readonly(
          "r2",
          [](const aa::TrajectoryRecord& r) {
            return stack2(r.samples, &aa::AtomPairState::r2);
          })
      .def_property_readonly(
          "p1",
          [](const aa::TrajectoryRecord& r) {
            return stack2(r.samples, &aa::AtomPairState::p1);
          })
      .def_property_readonly(
          "p2",
          [](const aa::TrajectoryRecord& r) {
            return stack2(r.samples, &aa::AtomPairState::p2);
          })
      .def_property_readonly(
          "psi",
          [](const aa::TrajectoryRecord& r) {
            Eigen::MatrixXcd out(static_cast<int>(r.samples.size()), 4);
            for (size_t i = 0; i < r.samples.size(); ++i)
              out.row(static_cast<int>(i)) = r.samples[i].psi().transpose();
            return out;
          })
      .def_property_readonly(
          "energy",
          [](const aa::TrajectoryRecord& r) { return r.sample_energy; })
      .def_property_readonly(
          "gamma_d",
          [](const aa::TrajectoryRecord& r) { return r.sample_gamma_d; })
      .def_property_readonly("propagator", [](const aa::TrajectoryRecord& r) {
        return r.propagator ? py::cast(*r.propagator) : py::none().cast<py::object>();
      });

  m.def(
      "simulate",
      [](const aa::ExperimentConfig& cfg, bool with_propagator) {
        aa::IntegrateOptions o = cfg.make_integrate_options();
        o.record_fine = false;
        o.record_propagator = with_propagator;
        return aa::integrate(cfg.make_model(), cfg.make_initial_state(),
                             cfg.make_initial_control(), o);
      },
      py::arg("cfg"), py::arg("with_propagator") = false,
      "Propagate the config's initial control loop.");
  m.def(
      "simulate_samples",
      [](const aa::ExperimentConfig& cfg, const Eigen::Matrix2Xd& samples,
         bool with_propagator) {
        aa::IntegrateOptions o = cfg.make_integrate_options();
        o.record_fine = false;
        o.record_propagator = with_propagator;
        return aa::integrate(cfg.make_model(), cfg.make_initial_state(),
                             control_of(cfg, samples), o);
      },
      py::arg("cfg"), py::arg("samples"), py::arg("with_propagator") = false,
      "Propagate a 2 x (N+1) matrix of control knots.");
  m.def(
      "initial_control_samples",
      [](const aa::ExperimentConfig& cfg) {
        return cfg.make_initial_control().samples();
      },
      py::arg("cfg"));

  // -- phase analysis ----------------------------------------------------
  py::class_<aa::PhaseBreakdown>(m, "PhaseBreakdown")
      .def_readonly("overlap_abs", &aa::PhaseBreakdown::overlap_abs)
      .def_readonly("gamma_total_rad", &aa::PhaseBreakdown::gamma_total_rad)
      .def_readonly("gamma_d_rad", &aa::PhaseBreakdown::gamma_d_rad)
      .def_readonly("gamma_g_rad", &aa::PhaseBreakdown::gamma_g_rad)
      .def_readonly("fidelity", &aa::PhaseBreakdown::fidelity)
      .def_readonly("eta1", &aa::PhaseBreakdown::eta1)
      .def_readonly("eta2", &aa::PhaseBreakdown::eta2)
      .def_readonly("final_occupation", &aa::PhaseBreakdown::final_occupation);
  m.def("analyze_phases", &aa::analyze_phases, py::arg("record"));
  m.def(
      "separability",
      [](const Eigen::Vector4cd& psi) {
        const aa::SeparabilityResult s = aa::separability(psi);
        return py::make_tuple(s.fidelity, s.eta1, s.eta2);
      },
      py::arg("psi"),
      "Best product-state fidelity of a channel state: (F, eta1, eta2).");

  // -- objective / gradient / descent -------------------------------------
  py::class_<aa::ObjectiveBreakdown>(m, "ObjectiveBreakdown")
      .def_readonly("total", &aa::ObjectiveBreakdown::total)
      .def_readonly("closure_r", &aa::ObjectiveBreakdown::closure_r)
      .def_readonly("closure_p", &aa::ObjectiveBreakdown::closure_p)
      .def_readonly("state_return", &aa::ObjectiveBreakdown::state_return)
      .def_readonly("phase_penalty", &aa::ObjectiveBreakdown::phase_penalty)
      .def_readonly("product_reward", &aa::ObjectiveBreakdown::product_reward)
      .def_readonly("smoothness", &aa::ObjectiveBreakdown::smoothness)
      .def_readonly("overlap_abs", &aa::ObjectiveBreakdown::overlap_abs)
      .def_readonly("fidelity", &aa::ObjectiveBreakdown::fidelity)
      .def_readonly("gamma_d_rad", &aa::ObjectiveBreakdown::gamma_d_rad)
      .def_readonly("gamma_g_rad", &aa::ObjectiveBreakdown::gamma_g_rad);

  m.def(
      "objective",
      [](const aa::ExperimentConfig& cfg, const Eigen::Matrix2Xd& samples) {
        return aa::evaluate_objective(cfg.make_model(),
                                      cfg.make_initial_state(),
                                      control_of(cfg, samples),
                                      cfg.make_objective(),
                                      cfg.make_integrate_options())
            .parts;
      },
      py::arg("cfg"), py::arg("samples"));
  m.def(
      "objective_gradient",
      [](const aa::ExperimentConfig& cfg, const Eigen::Matrix2Xd& samples) {
        const aa::GradientEval g = aa::objective_gradient(
            cfg.make_model(), cfg.make_initial_state(),
            control_of(cfg, samples), cfg.make_objective(),
            cfg.make_integrate_options());
        return py::make_tuple(g.eval.parts, g.gradient);
      },
      py::arg("cfg"), py::arg("samples"),
      "Adjoint gradient of the objective: (breakdown, dJ/dsamples).");
  m.def(
      "optimize",
      [](const aa::ExperimentConfig& cfg) {
        const aa::DescentResult res = aa::descend(
            cfg.make_model(), cfg.make_initial_state(),
            cfg.make_initial_control(), cfg.make_objective(),
            cfg.make_integrate_options(), cfg.make_descent_options());
        std::vector<double> J;
        for (const auto& it : res.history) J.push_back(it.J);
        return py::make_tuple(res.samples, res.converged, res.stop_reason, J);
      },
      py::arg("cfg"),
      "Run the descent from the config's initial guess: (samples, converged, "
      "stop_reason, objective_history).");
}
