#include "aaphase/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aaphase/constants.hpp"
#include "aaphase/errors.hpp"

namespace aa {

namespace {

constexpr const char* kToolVersion = "0.1.0";

class CsvOut {
 public:
  explicit CsvOut(const std::string& path)
      : path_(path), f_(std::fopen(path.c_str(), "wb")) {
    if (!f_) throw IoError("cannot open '" + path + "' for writing");
  }
  ~CsvOut() {
    if (f_) std::fclose(f_);
  }
  CsvOut(const CsvOut&) = delete;
  CsvOut& operator=(const CsvOut&) = delete;

  void header(const std::string& line) { raw(line + "\n"); }
  void raw(const std::string& text) {
    if (std::fwrite(text.data(), 1, text.size(), f_) != text.size())
      throw IoError("short write to '" + path_ + "'");
  }
  void field(double x) {
    std::fprintf(f_, "%s%.17g", first_ ? "" : ",", x);
    first_ = false;
  }
  void field(long x) {
    std::fprintf(f_, "%s%ld", first_ ? "" : ",", x);
    first_ = false;
  }
  void end_row() {
    std::fputc('\n', f_);
    first_ = true;
  }

 private:
  std::string path_;
  std::FILE* f_;
  bool first_ = true;
};

std::vector<double> parse_csv_row(const std::string& line,
                                  const std::string& path, int lineno) {
  std::vector<double> out;
  size_t start = 0;
  while (start <= line.size()) {
    size_t comma = line.find(',', start);
    if (comma == std::string::npos) comma = line.size();
    const std::string tok = line.substr(start, comma - start);
    char* end = nullptr;
    const double x = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size())
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": not a number: '" + tok + "'");
    out.push_back(x);
    start = comma + 1;
    if (comma == line.size()) break;
  }
  return out;
}

struct CsvTable {
  std::string header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path, size_t expect_cols) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  CsvTable t;
  if (!std::getline(in, t.header))
    throw IoError(path + ": empty file");
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto row = parse_csv_row(line, path, lineno);
    if (row.size() != expect_cols)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(expect_cols) + " columns, got " +
                    std::to_string(row.size()));
    t.rows.push_back(std::move(row));
  }
  if (t.rows.size() < 2)
    throw IoError(path + ": needs at least two data rows");
  return t;
}

void check_uniform_grid(const std::vector<std::vector<double>>& rows,
                        const std::string& path) {
  const double T = rows.back()[0];
  const double h = rows[1][0] - rows[0][0];
  const double tol = 1e-9 * std::max(1.0, std::abs(T));
  if (std::abs(rows.front()[0]) > tol)
    throw IoError(path + ": time grid must start at 0");
  for (size_t i = 0; i < rows.size(); ++i)
    if (std::abs(rows[i][0] - static_cast<double>(i) * h) > tol)
      throw IoError(path + ": time grid is not uniform");
}

nlohmann::ordered_json json_of(double x) {
  // nlohmann serializes NaN as null; make that explicit.
  if (!std::isfinite(x)) return nullptr;
  return x;
}

void dump_json(const std::string& path, const nlohmann::ordered_json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("short write to '" + path + "'");
}

nlohmann::ordered_json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return nlohmann::ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace

void write_record_csv(const std::string& path, const TrajectoryRecord& rec,
                      const ControlSignal& control) {
  CsvOut out(path);
  out.header(
      "t_us,ux_um,uy_um,r1x_um,r1y_um,p1x_hbar_per_um,p1y_hbar_per_um,"
      "r2x_um,r2y_um,p2x_hbar_per_um,p2y_hbar_per_um,"
      "psi_dd_re,psi_dd_im,psi_pf1_re,psi_pf1_im,psi_pf2_re,psi_pf2_im,"
      "psi_pf3_re,psi_pf3_im,energy_rad_per_us,gamma_d_rad");
  for (size_t i = 0; i < rec.samples.size(); ++i) {
    const double t = rec.sample_t[i];
    const Eigen::Vector2d u = control.value(t);
    const AtomPairState& s = rec.samples[i];
    out.field(t);
    out.field(u.x());
    out.field(u.y());
    out.field(s.r1.x());
    out.field(s.r1.y());
    out.field(s.p1.x());
    out.field(s.p1.y());
    out.field(s.r2.x());
    out.field(s.r2.y());
    out.field(s.p2.x());
    out.field(s.p2.y());
    for (int c = 0; c < 4; ++c) {
      out.field(s.psi_re[c]);
      out.field(s.psi_im[c]);
    }
    out.field(rec.sample_energy[i]);
    out.field(rec.sample_gamma_d[i]);
    out.end_row();
  }
}

void write_control_csv(const std::string& path, const ControlSignal& control) {
  CsvOut out(path);
  out.header("t_us,ux_um,uy_um");
  const auto& s = control.samples();
  const double h = control.knot_spacing();
  for (int i = 0; i < s.cols(); ++i) {
    out.field(i == s.cols() - 1 ? control.duration() : i * h);
    out.field(s(0, i));
    out.field(s(1, i));
    out.end_row();
  }
}

void write_iterations_csv(const std::string& path,
                          const std::vector<IterationInfo>& history) {
  CsvOut out(path);
  out.header(
      "iteration,objective,grad_norm,step,backtracks,restarted,"
      "closure_r,closure_p,state_return,phase_penalty,product_reward,"
      "smoothness,overlap_abs,fidelity,gamma_d_deg,gamma_g_deg");
  for (const auto& it : history) {
    out.field(static_cast<long>(it.iteration));
    out.field(it.J);
    out.field(it.grad_norm);
    out.field(it.step);
    out.field(static_cast<long>(it.backtracks));
    out.field(static_cast<long>(it.restarted ? 1 : 0));
    out.field(it.parts.closure_r);
    out.field(it.parts.closure_p);
    out.field(it.parts.state_return);
    out.field(it.parts.phase_penalty);
    out.field(it.parts.product_reward);
    out.field(it.parts.smoothness);
    out.field(it.parts.overlap_abs);
    out.field(it.parts.fidelity);
    out.field(it.parts.gamma_d_rad * units::deg_per_rad);
    out.field(it.parts.gamma_g_rad * units::deg_per_rad);
    out.end_row();
  }
}

void write_scan_csv(const std::string& path, const ScanResult& scan) {
  CsvOut out(path);
  out.header(
      "radius_um,distance_um,feasible,objective,overlap_abs,fidelity,"
      "gamma_d_deg,gamma_g_deg");
  for (const auto& c : scan.cells) {
    out.field(c.radius);
    out.field(c.distance);
    out.field(static_cast<long>(c.feasible ? 1 : 0));
    out.field(c.J);
    out.field(c.parts.overlap_abs);
    out.field(c.parts.fidelity);
    out.field(c.parts.gamma_d_rad * units::deg_per_rad);
    out.field(c.parts.gamma_g_rad * units::deg_per_rad);
    out.end_row();
  }
}

void write_noise_csv(const std::string& path, const EnsembleResult& ens) {
  CsvOut out(path);
  out.header(
      "realization,lost,loss_time_us,closure_atom1_um,closure_atom2_um,"
      "overlap_abs,fidelity,gamma_d_deg,gamma_g_deg");
  for (const auto& oc : ens.outcomes) {
    out.field(static_cast<long>(oc.index));
    out.field(static_cast<long>(oc.lost ? 1 : 0));
    out.field(oc.loss_time);
    out.field(oc.eps1);
    out.field(oc.eps2);
    out.field(oc.overlap_abs);
    out.field(oc.fidelity);
    out.field(oc.gamma_d_deg);
    out.field(oc.gamma_g_deg);
    out.end_row();
  }
}

void write_occupations_csv(const std::string& path,
                           const TrajectoryRecord& rec) {
  CsvOut out(path);
  out.header("t_us,pop_dd,pop_pf1,pop_pf2,pop_pf3");
  for (size_t i = 0; i < rec.samples.size(); ++i) {
    const AtomPairState& s = rec.samples[i];
    out.field(rec.sample_t[i]);
    for (int c = 0; c < 4; ++c)
      out.field(s.psi_re[c] * s.psi_re[c] + s.psi_im[c] * s.psi_im[c]);
    out.end_row();
  }
}

void write_phases_csv(const std::string& path, const TrajectoryRecord& rec) {
  CsvOut out(path);
  out.header("t_us,overlap_abs,gamma_total_deg,gamma_d_deg,gamma_g_deg");
  const Eigen::Vector4cd psi0 = rec.samples.front().psi();
  for (size_t i = 0; i < rec.samples.size(); ++i) {
    const std::complex<double> c = psi0.dot(rec.samples[i].psi());
    const double overlap = std::abs(c);
    const double gd = rec.sample_gamma_d[i];
    double gt = std::numeric_limits<double>::quiet_NaN();
    double gg = std::numeric_limits<double>::quiet_NaN();
    if (overlap > 1e-12) {
      gt = std::arg(c);
      gg = wrap_radians(gt - gd);
    }
    out.field(rec.sample_t[i]);
    out.field(overlap);
    out.field(gt * units::deg_per_rad);
    out.field(gd * units::deg_per_rad);
    out.field(gg * units::deg_per_rad);
    out.end_row();
  }
}

void write_histogram_csv(const std::string& path, const Histogram& hist) {
  CsvOut out(path);
  out.header("bin_lo,bin_hi,count");
  for (size_t b = 0; b < hist.counts.size(); ++b) {
    out.field(hist.edges[b]);
    out.field(hist.edges[b + 1]);
    out.field(hist.counts[b]);
    out.end_row();
  }
}

ControlSignal read_control_csv(const std::string& path) {
  const CsvTable t = read_csv(path, 3);
  check_uniform_grid(t.rows, path);
  Eigen::Matrix2Xd s(2, static_cast<int>(t.rows.size()));
  for (size_t i = 0; i < t.rows.size(); ++i) {
    s(0, static_cast<int>(i)) = t.rows[i][1];
    s(1, static_cast<int>(i)) = t.rows[i][2];
  }
  return ControlSignal(t.rows.back()[0], s);
}

TrajectoryRecord read_record_csv(const std::string& path) {
  const CsvTable t = read_csv(path, 21);
  check_uniform_grid(t.rows, path);
  TrajectoryRecord rec;
  rec.duration = t.rows.back()[0];
  rec.dt = t.rows[1][0] - t.rows[0][0];
  rec.substeps = 1;
  for (const auto& row : t.rows) {
    AtomPairState s;
    s.r1 = {row[3], row[4]};
    s.p1 = {row[5], row[6]};
    s.r2 = {row[7], row[8]};
    s.p2 = {row[9], row[10]};
    for (int c = 0; c < 4; ++c) {
      s.psi_re[c] = row[11 + 2 * c];
      s.psi_im[c] = row[12 + 2 * c];
    }
    rec.sample_t.push_back(row[0]);
    rec.samples.push_back(s);
    rec.sample_energy.push_back(row[19]);
    rec.sample_gamma_d.push_back(row[20]);
  }
  return rec;
}

void write_phase_report_json(const std::string& path, const PhaseBreakdown& pb,
                             const ReportContext& ctx) {
  nlohmann::ordered_json doc;
  doc["schema"] = "aaphase.phase_report.v1";
  doc["config_hash"] = ctx.config_hash;
  doc["prefix"] = ctx.prefix;
  doc["duration_us"] = ctx.duration_us;
  doc["angle_unit"] = "deg";
  doc["overlap_abs"] = json_of(pb.overlap_abs);
  doc["gamma_total_deg"] = json_of(pb.gamma_total_rad * units::deg_per_rad);
  doc["gamma_d_deg"] = json_of(pb.gamma_d_rad * units::deg_per_rad);
  doc["gamma_g_deg"] = json_of(pb.gamma_g_rad * units::deg_per_rad);
  doc["fidelity"] = json_of(pb.fidelity);
  doc["final_occupation"] = pb.final_occupation;
  auto cvec = [](const auto& v) {
    nlohmann::ordered_json j;
    std::vector<double> re, im;
    for (int i = 0; i < v.size(); ++i) {
      re.push_back(v[i].real());
      im.push_back(v[i].imag());
    }
    j["re"] = re;
    j["im"] = im;
    return j;
  };
  doc["eta1"] = cvec(pb.eta1);
  doc["eta2"] = cvec(pb.eta2);
  if (pb.spectrum) {
    std::vector<double> deg;
    for (int i = 0; i < 4; ++i)
      deg.push_back(pb.spectrum->phases[i] * units::deg_per_rad);
    doc["cyclic_eigenphases_deg"] = deg;
  } else {
    doc["cyclic_eigenphases_deg"] = nullptr;
  }
  dump_json(path, doc);
}

void write_checkpoint_json(const std::string& path, const Checkpoint& ck) {
  nlohmann::ordered_json doc;
  doc["schema"] = "aaphase.checkpoint.v1";
  doc["config_hash"] = ck.config_hash;
  doc["duration_us"] = ck.duration_us;
  doc["iteration"] = ck.iteration;
  doc["objective"] = json_of(ck.objective);
  std::vector<double> sx, sy;
  for (int i = 0; i < ck.samples.cols(); ++i) {
    sx.push_back(ck.samples(0, i));
    sy.push_back(ck.samples(1, i));
  }
  doc["samples_x"] = sx;
  doc["samples_y"] = sy;
  dump_json(path, doc);
}

Checkpoint read_checkpoint_json(const std::string& path) {
  const auto doc = load_json(path);
  Checkpoint ck;
  try {
    if (doc.at("schema").get<std::string>() != "aaphase.checkpoint.v1")
      throw IoError(path + ": not a checkpoint document");
    ck.config_hash = doc.at("config_hash").get<std::string>();
    ck.duration_us = doc.at("duration_us").get<double>();
    ck.iteration = doc.at("iteration").get<int>();
    ck.objective = doc.at("objective").is_null()
                       ? std::numeric_limits<double>::quiet_NaN()
                       : doc.at("objective").get<double>();
    const auto sx = doc.at("samples_x").get<std::vector<double>>();
    const auto sy = doc.at("samples_y").get<std::vector<double>>();
    if (sx.size() != sy.size() || sx.size() < 2)
      throw IoError(path + ": malformed checkpoint samples");
    ck.samples.resize(2, static_cast<int>(sx.size()));
    for (size_t i = 0; i < sx.size(); ++i) {
      ck.samples(0, static_cast<int>(i)) = sx[i];
      ck.samples(1, static_cast<int>(i)) = sy[i];
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return ck;
}

void write_noise_json(const std::string& path, const EnsembleResult& ens,
                      const BathSpec& bath, const ReportContext& ctx) {
  nlohmann::ordered_json doc;
  doc["schema"] = "aaphase.noise.v1";
  doc["config_hash"] = ctx.config_hash;
  doc["prefix"] = ctx.prefix;
  doc["duration_us"] = ctx.duration_us;
  doc["seed"] = ens.seed;
  doc["realizations"] = ens.realizations;
  doc["losses"] = ens.losses;
  doc["bath"] = {{"temperature_mK", bath.temperature_mK},
                 {"lambda_per_us", bath.lambda_per_us},
                 {"escape_sigmas", bath.escape_sigmas}};
  doc["angle_unit"] = "deg";
  nlohmann::ordered_json stats = nlohmann::ordered_json::array();
  for (const auto& s : ens.stats) {
    nlohmann::ordered_json js;
    js["name"] = s.name;
    js["count"] = s.count;
    js["mean"] = json_of(s.mean);
    js["stddev"] = json_of(s.stddev);
    js["histogram"] = {{"edges", s.hist.edges}, {"counts", s.hist.counts}};
    stats.push_back(js);
  }
  doc["stats"] = stats;
  dump_json(path, doc);
}

void write_manifest_json(const std::string& path, const ManifestInfo& info) {
  nlohmann::ordered_json doc;
  doc["schema"] = "aaphase.manifest.v1";
  doc["tool_version"] = kToolVersion;
  doc["command"] = info.command;
  doc["config_hash"] = info.config_hash;
  {
    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    doc["timestamp_utc"] = stamp;
  }
  if (info.seeded)
    doc["rng"] = {{"algorithm", "philox4x32-10"}, {"seed", info.seed}};
  else
    doc["rng"] = nullptr;
  doc["outputs"] = info.outputs;
  dump_json(path, doc);
}

}  // namespace aa
