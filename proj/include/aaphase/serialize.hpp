#pragma once

#include <string>
#include <vector>

#include "aaphase/control.hpp"
#include "aaphase/dynamics.hpp"
#include "aaphase/noise_mc.hpp"
#include "aaphase/optimal_control.hpp"
#include "aaphase/phase_analysis.hpp"

// Result persistence.  CSV files carry a single header row whose column names
// embed the units (angles in degrees for human-facing columns, _rad/_radus
// for internal ones); all floating numbers are written with 17 significant
// digits so read-back is exact and identical runs produce byte-identical
// files.  JSON documents use a fixed key order.  Timestamps appear only in
// the run manifest.

namespace aa {

// ---- CSV writers ----
void write_record_csv(const std::string& path, const TrajectoryRecord& rec,
                      const ControlSignal& control);
void write_control_csv(const std::string& path, const ControlSignal& control);
void write_iterations_csv(const std::string& path,
                          const std::vector<IterationInfo>& history);
void write_scan_csv(const std::string& path, const ScanResult& scan);
void write_noise_csv(const std::string& path, const EnsembleResult& ens);

// Plot-ready columnar families.
void write_occupations_csv(const std::string& path,
                           const TrajectoryRecord& rec);
void write_phases_csv(const std::string& path, const TrajectoryRecord& rec);
void write_histogram_csv(const std::string& path, const Histogram& hist);

// ---- CSV readers (artifact re-ingestion) ----
ControlSignal read_control_csv(const std::string& path);
// Knot-resolution record (samples, energies, phase accumulator) sufficient
// for phase analysis; fine-grid internals and the propagator are not stored.
TrajectoryRecord read_record_csv(const std::string& path);

// ---- JSON ----
struct ReportContext {
  std::string config_hash;
  std::string prefix;
  double duration_us = 0.0;
};
void write_phase_report_json(const std::string& path, const PhaseBreakdown& pb,
                             const ReportContext& ctx);

struct Checkpoint {
  double duration_us = 0.0;
  Eigen::Matrix2Xd samples;
  int iteration = 0;
  double objective = 0.0;
  std::string config_hash;
};
void write_checkpoint_json(const std::string& path, const Checkpoint& ck);
Checkpoint read_checkpoint_json(const std::string& path);

void write_noise_json(const std::string& path, const EnsembleResult& ens,
                      const BathSpec& bath, const ReportContext& ctx);

struct ManifestInfo {
  std::string command;
  std::string config_hash;
  uint64_t seed = 0;
  bool seeded = false;  // noise runs record their RNG metadata
  std::vector<std::string> outputs;
};
void write_manifest_json(const std::string& path, const ManifestInfo& info);

}  // namespace aa
