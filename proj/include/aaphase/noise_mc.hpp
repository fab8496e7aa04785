#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aaphase/dynamics.hpp"
#include "aaphase/optimal_control.hpp"

// Thermal robustness analysis: the deterministic propagation is augmented
// with an Ornstein-Uhlenbeck bath acting on the atomic momenta,
//     p -> p e^(-lambda dt) + xi,   Var(xi) = m kT (1 - e^(-2 lambda dt))
// applied exactly once after every fine integration step (an exact
// discretization of the OU process, so the splitting error is only the
// interleaving with the Hamiltonian flow).  With lambda = 0 the update is
// skipped entirely and the propagation is bit-for-bit the deterministic one.

namespace aa {

struct BathSpec {
  double temperature_mK = 0.1;
  double lambda_per_us = 5e-5;  // momentum relaxation rate
  double escape_sigmas = 3.0;   // terminal loss radius, in trap waists
};

TrajectoryRecord langevin_integrate(const SystemModel& model,
                                    const AtomPairState& initial,
                                    const ControlSignal& control,
                                    const IntegrateOptions& opts,
                                    const BathSpec& bath, uint64_t seed,
                                    uint32_t realization);

struct RealizationOutcome {
  int index = 0;
  bool lost = false;
  double loss_time = 0.0;  // guard-violation time, or T for terminal escape
  // Survivor quantities (NaN when lost, or when the overlap is degenerate).
  double eps1 = 0.0, eps2 = 0.0;  // |r^a(T) - r^a(0)|, um
  double overlap_abs = 0.0;
  double fidelity = 0.0;
  double gamma_d_deg = 0.0;
  double gamma_g_deg = 0.0;
};

struct Histogram {
  std::vector<double> edges;   // nbins + 1
  std::vector<long> counts;    // nbins
};

// Freedman-Diaconis binning; collapses to a single bin when the IQR (or the
// data range) is degenerate.
Histogram freedman_diaconis(std::vector<double> values);

struct QuantityStats {
  std::string name;
  long count = 0;          // values entering the statistics
  double mean = 0.0;
  double stddev = 0.0;     // population; exactly 0 when all values coincide
  Histogram hist;
};

struct EnsembleResult {
  int realizations = 0;
  int losses = 0;
  uint64_t seed = 0;
  std::vector<RealizationOutcome> outcomes;  // ordered by index
  std::vector<QuantityStats> stats;  // eps1, eps2, overlap, fidelity, phases
};

EnsembleResult run_ensemble(const SystemModel& model,
                            const AtomPairState& initial,
                            const ControlSignal& control,
                            const IntegrateOptions& opts, const BathSpec& bath,
                            uint64_t seed, int realizations, int workers);

// Time-averaged kinetic energy per motional degree of freedom over the
// record samples with t >= t_start (equilibration check: must approach
// kT/2 for a thermalized bath).
double mean_kinetic_per_dof(const SystemModel& model,
                            const TrajectoryRecord& record, double t_start);

}  // namespace aa
