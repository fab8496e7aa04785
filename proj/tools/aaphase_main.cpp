#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "aaphase/constants.hpp"
#include "aaphase/errors.hpp"
#include "aaphase/run.hpp"

namespace {

void print_phases(const aa::PhaseBreakdown& pb) {
  std::printf("overlap |<psi(0)|psi(T)>| : %.6f\n", pb.overlap_abs);
  std::printf("gamma_total               : %9.3f deg (wrapped)\n",
              pb.gamma_total_rad * aa::units::deg_per_rad);
  std::printf("gamma_d                   : %9.3f deg\n",
              pb.gamma_d_rad * aa::units::deg_per_rad);
  std::printf("gamma_g                   : %9.3f deg\n",
              pb.gamma_g_rad * aa::units::deg_per_rad);
  std::printf("product-state fidelity    : %.6f\n", pb.fidelity);
  std::printf("final occupation          : dd=%.4f pf1=%.4f pf2=%.4f pf3=%.4f\n",
              pb.final_occupation[0], pb.final_occupation[1],
              pb.final_occupation[2], pb.final_occupation[3]);
}

void print_files(const std::vector<std::string>& files) {
  for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "aaphase: closed-loop tweezer trajectories for a Rydberg atom pair --- "
      "simulation, geometric-phase analysis, adjoint optimization, loop-"
      "geometry scans, and thermal-noise ensembles."};
  app.require_subcommand(1);

  std::string config_path;
  aa::RunOptions ropts;
  uint64_t seed = 0;
  bool have_seed = false;

  const auto add_common = [&](CLI::App* cmd, bool with_resume) {
    cmd->add_option("--config", config_path, "experiment description file")
        ->required();
    cmd->add_option("--out", ropts.out_dir, "output directory (default .)");
    cmd->add_option("--seed", seed, "master RNG seed for noise ensembles")
        ->each([&](const std::string&) { have_seed = true; });
    if (with_resume)
      cmd->add_option("--resume", ropts.resume_checkpoint,
                      "checkpoint JSON to continue from");
    cmd->add_flag("--quiet", ropts.quiet, "suppress progress output");
  };

  CLI::App* c_sim = app.add_subcommand(
      "simulate", "propagate the configured initial control loop");
  CLI::App* c_opt = app.add_subcommand(
      "optimize", "adjoint descent on the control loop");
  CLI::App* c_scan = app.add_subcommand(
      "scan", "objective table over circle radius x center distance");
  CLI::App* c_noise = app.add_subcommand(
      "noise", "Langevin ensemble on an optimized control");
  CLI::App* c_report = app.add_subcommand(
      "phase-report", "phase analysis of an existing record artifact");
  add_common(c_sim, false);
  add_common(c_opt, true);
  add_common(c_scan, false);
  add_common(c_noise, false);
  add_common(c_report, false);

  CLI11_PARSE(app, argc, argv);
  if (have_seed) ropts.seed = seed;

  try {
    const aa::ExperimentConfig cfg = aa::load_config(config_path);

    if (c_sim->parsed()) {
      const aa::SimulateOutcome out = aa::run_simulate(cfg, ropts);
      print_phases(out.phases);
      print_files(out.files);
    } else if (c_opt->parsed()) {
      const aa::OptimizeOutcome out = aa::run_optimize(cfg, ropts);
      const auto& hist = out.descent.history;
      std::printf("descent: %zu iterations, %s (%s)\n", hist.size(),
                  out.descent.converged ? "converged" : "stopped",
                  out.descent.stop_reason.c_str());
      if (!hist.empty())
        std::printf("objective: %.8e  grad_norm: %.3e\n", hist.back().J,
                    hist.back().grad_norm);
      const auto& rec = out.record;
      std::printf("loop closure              : atom1 %.4g um, atom2 %.4g um\n",
                  (rec.final_state().r1 - rec.initial_state().r1).norm(),
                  (rec.final_state().r2 - rec.initial_state().r2).norm());
      print_phases(out.phases);
      print_files(out.files);
    } else if (c_scan->parsed()) {
      const aa::ScanOutcome out = aa::run_scan(cfg, ropts);
      if (out.scan.best >= 0) {
        const auto& b = out.scan.cells[out.scan.best];
        std::printf("best cell: r=%.2f um d=%.2f um  J=%.6e  gg=%.2f deg\n",
                    b.radius, b.distance, b.J,
                    b.parts.gamma_g_rad * aa::units::deg_per_rad);
      } else {
        std::printf("no feasible scan cell\n");
      }
      print_files(out.files);
    } else if (c_noise->parsed()) {
      const aa::NoiseOutcome out = aa::run_noise(cfg, ropts);
      std::printf("realizations: %d  losses: %d  seed: %llu\n",
                  out.ensemble.realizations, out.ensemble.losses,
                  static_cast<unsigned long long>(out.ensemble.seed));
      for (const auto& st : out.ensemble.stats)
        std::printf("%-18s count=%ld mean=%.6g stddev=%.6g\n",
                    st.name.c_str(), st.count, st.mean, st.stddev);
      print_files(out.files);
    } else if (c_report->parsed()) {
      const aa::ReportOutcome out = aa::run_phase_report(cfg, ropts);
      print_phases(out.phases);
      print_files(out.files);
    }
  } catch (const aa::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const aa::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const aa::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
