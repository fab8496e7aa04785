#include "aaphase/run.hpp"

#include <cstdio>
#include <filesystem>

#include "aaphase/constants.hpp"
#include "aaphase/errors.hpp"

namespace aa {

namespace {

class ArtifactSet {
 public:
  ArtifactSet(const ExperimentConfig& cfg, const RunOptions& opts,
              const std::string& command)
      : dir_(opts.out_dir.empty() ? "." : opts.out_dir),
        prefix_(cfg.output_prefix),
        command_(command),
        hash_(aa::config_hash(cfg)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec)
      throw IoError("cannot create output directory '" + dir_ +
                    "': " + ec.message());
  }

  std::string path(const std::string& suffix) {
    const std::string p = dir_ + "/" + prefix_ + "_" + suffix;
    files_.push_back(p);
    return p;
  }
  // A path that already exists (inputs are not listed in the manifest).
  std::string existing(const std::string& suffix) const {
    return dir_ + "/" + prefix_ + "_" + suffix;
  }

  const std::string& config_hash() const { return hash_; }
  ReportContext report_context(double duration) const {
    return ReportContext{hash_, prefix_, duration};
  }

  std::vector<std::string> finish(uint64_t seed, bool seeded) {
    ManifestInfo info;
    info.command = command_;
    info.config_hash = hash_;
    info.seed = seed;
    info.seeded = seeded;
    const std::string manifest = path("manifest.json");
    info.outputs = files_;
    write_manifest_json(manifest, info);
    return files_;
  }

 private:
  std::string dir_, prefix_, command_, hash_;
  std::vector<std::string> files_;
};

PhaseBreakdown write_record_family(ArtifactSet& art,
                                   const TrajectoryRecord& rec,
                                   const ControlSignal& control) {
  write_record_csv(art.path("record.csv"), rec, control);
  write_control_csv(art.path("control.csv"), control);
  write_occupations_csv(art.path("occupations.csv"), rec);
  write_phases_csv(art.path("phases.csv"), rec);
  const PhaseBreakdown pb = analyze_phases(rec);
  write_phase_report_json(art.path("phase_report.json"), pb,
                          art.report_context(rec.duration));
  return pb;
}

}  // namespace

SimulateOutcome run_simulate(const ExperimentConfig& cfg,
                             const RunOptions& opts) {
  ArtifactSet art(cfg, opts, "simulate");
  const SystemModel model = cfg.make_model();
  const AtomPairState initial = cfg.make_initial_state();
  const ControlSignal control = cfg.make_initial_control();
  IntegrateOptions iopts = cfg.make_integrate_options();
  iopts.record_fine = false;
  iopts.record_propagator = true;

  SimulateOutcome out{integrate(model, initial, control, iopts), {}, {}};
  out.phases = write_record_family(art, out.record, control);
  out.files = art.finish(0, false);
  return out;
}

OptimizeOutcome run_optimize(const ExperimentConfig& cfg,
                             const RunOptions& opts) {
  ArtifactSet art(cfg, opts, "optimize");
  const SystemModel model = cfg.make_model();
  const AtomPairState initial = cfg.make_initial_state();
  const IntegrateOptions iopts = cfg.make_integrate_options();
  const ObjectiveSpec spec = cfg.make_objective();
  const DescentOptions dopts = cfg.make_descent_options();

  ControlSignal control = cfg.make_initial_control();
  int iter_offset = 0;
  if (!opts.resume_checkpoint.empty()) {
    const Checkpoint ck = read_checkpoint_json(opts.resume_checkpoint);
    if (ck.config_hash != art.config_hash() && !opts.quiet)
      std::fprintf(stderr,
                   "note: checkpoint %s was produced under a different "
                   "config (hash %s vs %s)\n",
                   opts.resume_checkpoint.c_str(), ck.config_hash.c_str(),
                   art.config_hash().c_str());
    if (ck.samples.cols() != control.samples().cols() ||
        std::abs(ck.duration_us - cfg.duration_us) >
            1e-9 * std::max(1.0, cfg.duration_us))
      throw ConfigError("checkpoint '" + opts.resume_checkpoint +
                        "' does not match the configured horizon/grid");
    control.set_samples(ck.samples);
    iter_offset = ck.iteration;
  }

  const std::string ckpt_path = art.path("checkpoint.json");
  const auto save_ckpt = [&](const Eigen::Matrix2Xd& samples, int iteration,
                             double J) {
    Checkpoint ck;
    ck.duration_us = cfg.duration_us;
    ck.samples = samples;
    ck.iteration = iteration;
    ck.objective = J;
    ck.config_hash = art.config_hash();
    write_checkpoint_json(ckpt_path, ck);
  };

  const IterationCallback progress = [&](const IterationInfo& info,
                                         const Eigen::Matrix2Xd& samples) {
    const int iter = iter_offset + info.iteration;
    if (!opts.quiet && (info.iteration % 25 == 0 || info.iteration == 1))
      std::fprintf(stderr,
                   "iter %4d  J=% .6e  |g|=%.3e  step=%.2e  "
                   "gd=%7.2f deg  gg=%7.2f deg  F=%.4f\n",
                   iter, info.J, info.grad_norm, info.step,
                   info.parts.gamma_d_rad * units::deg_per_rad,
                   info.parts.gamma_g_rad * units::deg_per_rad,
                   info.parts.fidelity);
    if (info.iteration % 25 == 0) save_ckpt(samples, iter, info.J);
  };

  DescentResult res = descend(model, initial, control, spec, iopts, dopts,
                              progress);
  control.set_samples(res.samples);
  const int final_iter =
      iter_offset + (res.history.empty() ? 0 : res.history.back().iteration);
  save_ckpt(res.samples, final_iter,
            res.history.empty() ? 0.0 : res.history.back().J);
  write_iterations_csv(art.path("iterations.csv"), res.history);

  IntegrateOptions final_opts = iopts;
  final_opts.record_fine = false;
  final_opts.record_propagator = true;
  TrajectoryRecord record = integrate(model, initial, control, final_opts);
  OptimizeOutcome out{std::move(res), std::move(control), std::move(record),
                      {}, {}};
  out.phases = write_record_family(art, out.record, out.control);
  out.files = art.finish(0, false);
  return out;
}

ScanOutcome run_scan(const ExperimentConfig& cfg, const RunOptions& opts) {
  ArtifactSet art(cfg, opts, "scan");
  const SystemModel model = cfg.make_model();
  const Eigen::Vector2d origin = cfg.static_pos_um;
  const Eigen::Vector2d axis =
      (cfg.start_pos_um - cfg.static_pos_um).normalized();
  IntegrateOptions iopts = cfg.make_integrate_options();
  iopts.record_fine = false;

  ScanOutcome out{circle_scan(model, origin, axis, cfg.psi0_re(),
                              cfg.psi0_im(), cfg.duration_us, cfg.samples,
                              cfg.make_scan_objective(), iopts,
                              cfg.make_scan_request()),
                  {}};
  write_scan_csv(art.path("scan.csv"), out.scan);
  out.files = art.finish(0, false);
  return out;
}

NoiseOutcome run_noise(const ExperimentConfig& cfg, const RunOptions& opts) {
  ArtifactSet art(cfg, opts, "noise");
  const std::string control_path = art.existing("control.csv");
  if (!std::filesystem::exists(control_path))
    throw IoError("noise needs the optimized control at '" + control_path +
                  "' (run optimize first)");
  const ControlSignal control = read_control_csv(control_path);
  if (std::abs(control.duration() - cfg.duration_us) >
      1e-9 * std::max(1.0, cfg.duration_us))
    throw ConfigError("control artifact duration " +
                      std::to_string(control.duration()) +
                      " us does not match the configured horizon");

  const SystemModel model = cfg.make_model();
  const AtomPairState initial = cfg.make_initial_state();
  IntegrateOptions iopts = cfg.make_integrate_options();
  iopts.record_fine = false;
  const BathSpec bath = cfg.make_bath();
  const uint64_t seed = opts.seed.value_or(1);

  NoiseOutcome out{run_ensemble(model, initial, control, iopts, bath, seed,
                                cfg.noise_realizations, cfg.noise_workers),
                   {}};
  write_noise_csv(art.path("noise.csv"), out.ensemble);
  write_noise_json(art.path("noise.json"), out.ensemble, bath,
                   art.report_context(cfg.duration_us));
  for (const auto& st : out.ensemble.stats)
    write_histogram_csv(art.path("hist_" + st.name + ".csv"), st.hist);
  out.files = art.finish(seed, true);
  return out;
}

ReportOutcome run_phase_report(const ExperimentConfig& cfg,
                               const RunOptions& opts) {
  ArtifactSet art(cfg, opts, "phase-report");
  const std::string record_path = art.existing("record.csv");
  if (!std::filesystem::exists(record_path))
    throw IoError("phase-report needs a record at '" + record_path +
                  "' (run simulate or optimize first)");
  const TrajectoryRecord rec = read_record_csv(record_path);
  ReportOutcome out{analyze_phases(rec), {}};
  write_phase_report_json(art.path("phase_report.json"), out.phases,
                          art.report_context(rec.duration));
  out.files = art.finish(0, false);
  return out;
}

}  // namespace aa
