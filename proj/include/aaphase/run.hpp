#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aaphase/config.hpp"
#include "aaphase/serialize.hpp"

// Experiment orchestration shared by the command-line tool and the
// acceptance harness.  Each runner executes one subcommand against a loaded
// config, writes its artifact set into `out_dir` under the config's output
// prefix (`<prefix>_record.csv`, `<prefix>_control.csv`, ...), finishes with
// a run manifest listing every file written, and returns the in-memory
// results for further inspection.
//
// Artifact conventions:
//   simulate      -> record/control/occupations/phases CSV + phase report JSON
//   optimize      -> those plus iterations CSV and a resumable checkpoint
//   scan          -> scan table CSV
//   noise         -> per-realization CSV, summary JSON, histogram CSVs;
//                    reads <prefix>_control.csv from out_dir (run optimize first)
//   phase-report  -> phase report JSON from an existing <prefix>_record.csv

namespace aa {

struct RunOptions {
  std::string out_dir = ".";
  std::optional<uint64_t> seed;    // noise master seed override (default 1)
  std::string resume_checkpoint;   // optimize: continue from this checkpoint
  bool quiet = false;              // suppress stderr progress
};

struct SimulateOutcome {
  TrajectoryRecord record;
  PhaseBreakdown phases;
  std::vector<std::string> files;
};

struct OptimizeOutcome {
  DescentResult descent;
  ControlSignal control;  // optimized signal
  TrajectoryRecord record;
  PhaseBreakdown phases;
  std::vector<std::string> files;
};

struct ScanOutcome {
  ScanResult scan;
  std::vector<std::string> files;
};

struct NoiseOutcome {
  EnsembleResult ensemble;
  std::vector<std::string> files;
};

struct ReportOutcome {
  PhaseBreakdown phases;
  std::vector<std::string> files;
};

SimulateOutcome run_simulate(const ExperimentConfig& cfg,
                             const RunOptions& opts);
OptimizeOutcome run_optimize(const ExperimentConfig& cfg,
                             const RunOptions& opts);
ScanOutcome run_scan(const ExperimentConfig& cfg, const RunOptions& opts);
NoiseOutcome run_noise(const ExperimentConfig& cfg, const RunOptions& opts);
ReportOutcome run_phase_report(const ExperimentConfig& cfg,
                               const RunOptions& opts);

}  // namespace aa
