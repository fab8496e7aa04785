#include "aaphase/noise_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "aaphase/constants.hpp"
#include "aaphase/errors.hpp"
#include "aaphase/phase_analysis.hpp"
#include "aaphase/rng.hpp"

namespace aa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Linear-interpolation quantile of a sorted sample.
double quantile_sorted(const std::vector<double>& v, double p) {
  const size_t n = v.size();
  if (n == 1) return v[0];
  const double pos = p * static_cast<double>(n - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

// Smallest distance to any trap center, measured in that trap's waist.  The
// mobile trap sits at the control's terminal value.
double min_waist_distance(const FieldSet& fields, const Eigen::Vector2d& r,
                          const Eigen::Vector2d& u_final) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : fields.fields()) {
    const Eigen::Vector2d c = f.mobile ? u_final : f.center;
    best = std::min(best, (r - c).norm() / f.sigma);
  }
  return best;
}

}  // namespace

TrajectoryRecord langevin_integrate(const SystemModel& model,
                                    const AtomPairState& initial,
                                    const ControlSignal& control,
                                    const IntegrateOptions& opts,
                                    const BathSpec& bath, uint64_t seed,
                                    uint32_t realization) {
  if (bath.lambda_per_us < 0.0)
    throw NumericError("langevin_integrate: negative relaxation rate");
  if (bath.temperature_mK < 0.0)
    throw NumericError("langevin_integrate: negative bath temperature");

  IntegrateOptions local = opts;
  if (bath.lambda_per_us > 0.0) {
    const double dt = effective_step(control, opts.dt);
    const double decay = std::exp(-bath.lambda_per_us * dt);
    const double kT = bath.temperature_mK * units::mK_to_radus;
    const double sigma =
        std::sqrt(model.mass * kT * (1.0 - decay * decay));
    const Philox rng(seed);
    // Draw counters are (2*step + j, realization): stateless, so the same
    // (seed, realization) pair reproduces the same kicks regardless of which
    // worker thread runs it.
    local.post_step = [decay, sigma, rng, realization](int step,
                                                       AtomPairState& y) {
      const uint64_t base = 2 * static_cast<uint64_t>(step);
      const auto g1 = rng.normal_pair(base, realization, 0);
      const auto g2 = rng.normal_pair(base + 1, realization, 0);
      y.p1.x() = decay * y.p1.x() + sigma * g1[0];
      y.p1.y() = decay * y.p1.y() + sigma * g1[1];
      y.p2.x() = decay * y.p2.x() + sigma * g2[0];
      y.p2.y() = decay * y.p2.y() + sigma * g2[1];
    };
  }
  return integrate(model, initial, control, local);
}

Histogram freedman_diaconis(std::vector<double> values) {
  Histogram h;
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double x) { return !std::isfinite(x); }),
               values.end());
  if (values.empty()) return h;
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  const double lo = values.front(), hi = values.back();
  const double iqr =
      quantile_sorted(values, 0.75) - quantile_sorted(values, 0.25);
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
  if (!(width > 0.0) || !(hi > lo)) {
    // Degenerate sample: one bin covering the (possibly zero-width) range.
    const double pad = (hi > lo) ? 0.0 : std::max(0.5, std::abs(lo) * 1e-9);
    h.edges = {lo - pad, hi + pad};
    h.counts = {static_cast<long>(n)};
    return h;
  }
  const int nbins =
      std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
  h.edges.resize(nbins + 1);
  for (int i = 0; i <= nbins; ++i) h.edges[i] = lo + i * width;
  h.counts.assign(nbins, 0);
  for (double x : values) {
    int b = static_cast<int>(std::floor((x - lo) / width));
    b = std::min(std::max(b, 0), nbins - 1);
    ++h.counts[b];
  }
  return h;
}

namespace {

QuantityStats make_stats(const std::string& name,
                         const std::vector<double>& raw) {
  QuantityStats s;
  s.name = name;
  std::vector<double> v;
  v.reserve(raw.size());
  for (double x : raw)
    if (std::isfinite(x)) v.push_back(x);
  s.count = static_cast<long>(v.size());
  if (v.empty()) {
    s.mean = kNaN;
    s.stddev = kNaN;
    return s;
  }
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  if (*mn == *mx) {
    // All realizations coincide (e.g. a zero-coupling bath): report exactly
    // zero spread rather than rounding residue.
    s.stddev = 0.0;
    s.mean = *mn;
  } else {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(v.size()));
  }
  s.hist = freedman_diaconis(v);
  return s;
}

}  // namespace

EnsembleResult run_ensemble(const SystemModel& model,
                            const AtomPairState& initial,
                            const ControlSignal& control,
                            const IntegrateOptions& opts, const BathSpec& bath,
                            uint64_t seed, int realizations, int workers) {
  if (realizations <= 0)
    throw NumericError("run_ensemble: need at least one realization");

  EnsembleResult out;
  out.realizations = realizations;
  out.seed = seed;
  out.outcomes.resize(realizations);

  IntegrateOptions run_opts = opts;
  run_opts.record_fine = false;
  run_opts.record_propagator = false;

  const Eigen::Vector2d u_final = control.value(control.duration());

  const auto run_one = [&](int idx) {
    RealizationOutcome oc;
    oc.index = idx;
    oc.eps1 = oc.eps2 = kNaN;
    oc.overlap_abs = oc.fidelity = kNaN;
    oc.gamma_d_deg = oc.gamma_g_deg = kNaN;
    try {
      const TrajectoryRecord rec =
          langevin_integrate(model, initial, control, run_opts, bath, seed,
                             static_cast<uint32_t>(idx));
      const AtomPairState& fin = rec.final_state();
      const double w1 = min_waist_distance(model.fields, fin.r1, u_final);
      const double w2 = min_waist_distance(model.fields, fin.r2, u_final);
      if (w1 > bath.escape_sigmas || w2 > bath.escape_sigmas) {
        oc.lost = true;
        oc.loss_time = rec.duration;
        return oc;
      }
      oc.eps1 = (fin.r1 - initial.r1).norm();
      oc.eps2 = (fin.r2 - initial.r2).norm();
      try {
        const PhaseBreakdown pb = analyze_phases(rec);
        oc.overlap_abs = pb.overlap_abs;
        oc.fidelity = pb.fidelity;
        oc.gamma_d_deg = pb.gamma_d_rad * units::deg_per_rad;
        oc.gamma_g_deg = pb.gamma_g_rad * units::deg_per_rad;
      } catch (const NumericError&) {
        // Overlap too small to define phases; keep the survivor's closure
        // numbers and leave the phase entries out of the statistics.
      }
    } catch (const GeometryError& e) {
      oc.lost = true;
      oc.loss_time = e.t_us;
    } catch (const NumericError&) {
      oc.lost = true;
      oc.loss_time = control.duration();
    }
    return oc;
  };

  const int nw = std::max(1, workers);
  if (nw == 1) {
    for (int i = 0; i < realizations; ++i) out.outcomes[i] = run_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          const int i = next.fetch_add(1);
          if (i >= realizations) return;
          out.outcomes[i] = run_one(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<double> eps1, eps2, overlap, fid, gd, gg;
  for (const auto& oc : out.outcomes) {
    if (oc.lost) {
      ++out.losses;
      continue;
    }
    eps1.push_back(oc.eps1);
    eps2.push_back(oc.eps2);
    overlap.push_back(oc.overlap_abs);
    fid.push_back(oc.fidelity);
    gd.push_back(oc.gamma_d_deg);
    gg.push_back(oc.gamma_g_deg);
  }
  out.stats.push_back(make_stats("closure_atom1_um", eps1));
  out.stats.push_back(make_stats("closure_atom2_um", eps2));
  out.stats.push_back(make_stats("overlap_abs", overlap));
  out.stats.push_back(make_stats("fidelity", fid));
  out.stats.push_back(make_stats("gamma_d_deg", gd));
  out.stats.push_back(make_stats("gamma_g_deg", gg));
  return out;
}

double mean_kinetic_per_dof(const SystemModel& model,
                            const TrajectoryRecord& record, double t_start) {
  double acc = 0.0;
  long count = 0;
  for (size_t i = 0; i < record.samples.size(); ++i) {
    if (record.sample_t[i] < t_start) continue;
    const AtomPairState& s = record.samples[i];
    acc += s.p1.squaredNorm() + s.p2.squaredNorm();
    ++count;
  }
  if (count == 0)
    throw NumericError("mean_kinetic_per_dof: no samples past t_start");
  // Four motional degrees of freedom; <p^2>/(2m) per dof.
  return acc / (2.0 * model.mass * 4.0 * static_cast<double>(count));
}

}  // namespace aa
