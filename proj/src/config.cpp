#include "aaphase/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "aaphase/constants.hpp"
#include "aaphase/errors.hpp"

namespace aa {

namespace {

enum class Kind { real, integer, boolean, word, vec2 };

struct KeyDef {
  const char* key = nullptr;
  Kind kind = Kind::real;
  const char* unit = nullptr;  // nullptr = dimensionless
  double ExperimentConfig::* d = nullptr;
  int ExperimentConfig::* i = nullptr;
  bool ExperimentConfig::* b = nullptr;
  std::string ExperimentConfig::* s = nullptr;
  Eigen::Vector2d ExperimentConfig::* v = nullptr;
  bool ExperimentConfig::* present = nullptr;  // optional keys track presence
  std::vector<std::string> allowed;            // word kind: allowed values
};

KeyDef real_key(const char* k, const char* unit, double ExperimentConfig::* m,
                bool ExperimentConfig::* present = nullptr) {
  KeyDef def;
  def.key = k;
  def.kind = Kind::real;
  def.unit = unit;
  def.d = m;
  def.present = present;
  return def;
}

KeyDef int_key(const char* k, int ExperimentConfig::* m) {
  KeyDef def;
  def.key = k;
  def.kind = Kind::integer;
  def.i = m;
  return def;
}

KeyDef bool_key(const char* k, bool ExperimentConfig::* m) {
  KeyDef def;
  def.key = k;
  def.kind = Kind::boolean;
  def.b = m;
  return def;
}

KeyDef word_key(const char* k, std::string ExperimentConfig::* m,
                std::vector<std::string> allowed = {}) {
  KeyDef def;
  def.key = k;
  def.kind = Kind::word;
  def.s = m;
  def.allowed = std::move(allowed);
  return def;
}

KeyDef vec_key(const char* k, const char* unit,
               Eigen::Vector2d ExperimentConfig::* m) {
  KeyDef def;
  def.key = k;
  def.kind = Kind::vec2;
  def.unit = unit;
  def.v = m;
  return def;
}

// Declaration order is the canonical serialization order.
const std::vector<KeyDef>& registry() {
  using C = ExperimentConfig;
  static const std::vector<KeyDef> defs = {
      int_key("schema_version", &C::schema_version),

      real_key("physics.c3", "GHz_um3", &C::c3_GHz_um3),
      word_key("physics.species", &C::species, {"Rb87"}),
      vec_key("physics.quantization_axis", nullptr, &C::quantization_axis),
      real_key("physics.guard_radius", "um", &C::guard_um),

      real_key("trap.mobile_depth", "mK", &C::mobile_depth_mK),
      real_key("trap.static_depth", "mK", &C::static_depth_mK),
      real_key("trap.sigma", "um", &C::sigma_um),
      vec_key("trap.static_position", "um", &C::static_pos_um),
      vec_key("trap.start_position", "um", &C::start_pos_um),

      real_key("horizon.duration", "us", &C::duration_us),
      real_key("horizon.dt", "us", &C::dt_us),
      int_key("horizon.samples", &C::samples),

      word_key("state.initial", &C::initial_state, {"dd", "pf1", "pf2", "pf3"}),

      real_key("weights.chi_r", nullptr, &C::chi_r),
      real_key("weights.chi_p", nullptr, &C::chi_p),
      real_key("weights.chi_psi", nullptr, &C::chi_psi),
      real_key("weights.chi_dy", nullptr, &C::chi_dy),
      real_key("weights.nu_x", nullptr, &C::nu_x),
      real_key("weights.nu_y", nullptr, &C::nu_y),
      word_key("weights.phase_target", &C::phase_target,
               {"dynamical", "geometric"}),

      word_key("adjoint.pairing", &C::adjoint_pairing,
               {"derived", "alternate"}),

      word_key("init.shape", &C::init_shape, {"circle", "ellipse"}),
      real_key("init.radius", "um", &C::init_radius_um),
      real_key("init.height", "um", &C::init_height_um),
      real_key("init.width", "um", &C::init_width_um),
      bool_key("init.ccw", &C::init_ccw),
      real_key("init.distance", "um", &C::init_distance_um),
      bool_key("init.launch", &C::init_launch),
      bool_key("init.feedforward", &C::init_feedforward),

      int_key("optimizer.max_iters", &C::max_iters),
      real_key("optimizer.grad_tol", nullptr, &C::grad_tol),
      real_key("optimizer.step0", nullptr, &C::step0),
      real_key("optimizer.armijo_c", nullptr, &C::armijo_c),
      real_key("optimizer.backtrack", nullptr, &C::backtrack),
      int_key("optimizer.max_backtracks", &C::max_backtracks),
      bool_key("optimizer.nesterov", &C::nesterov),
      real_key("optimizer.momentum_beta", nullptr, &C::momentum_beta),
      real_key("optimizer.step_growth", nullptr, &C::step_growth),

      real_key("scan.r_min", "um", &C::scan_r_min_um),
      real_key("scan.r_max", "um", &C::scan_r_max_um),
      real_key("scan.r_step", "um", &C::scan_r_step_um),
      real_key("scan.d_min", "um", &C::scan_d_min_um),
      real_key("scan.d_max", "um", &C::scan_d_max_um),
      real_key("scan.d_step", "um", &C::scan_d_step_um),
      int_key("scan.workers", &C::scan_workers),
      real_key("scan.chi_r", nullptr, &C::scan_chi_r, &C::has_scan_chi_r),
      real_key("scan.chi_p", nullptr, &C::scan_chi_p, &C::has_scan_chi_p),
      real_key("scan.chi_psi", nullptr, &C::scan_chi_psi,
               &C::has_scan_chi_psi),
      real_key("scan.chi_dy", nullptr, &C::scan_chi_dy, &C::has_scan_chi_dy),

      real_key("noise.temperature", "mK", &C::bath_temperature_mK),
      real_key("noise.lambda", "per_ms", &C::bath_lambda_per_ms),
      int_key("noise.realizations", &C::noise_realizations),
      real_key("noise.escape_sigmas", nullptr, &C::escape_sigmas),
      int_key("noise.workers", &C::noise_workers),

      word_key("output.prefix", &C::output_prefix),
  };
  return defs;
}

const KeyDef* find_key(const std::string& key) {
  for (const auto& d : registry())
    if (key == d.key) return &d;
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> tokens_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_real(const std::string& tok, const std::function<void(const std::string&)>& fail) {
  char* end = nullptr;
  const double x = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty())
    fail("not a number: '" + tok + "'");
  if (!std::isfinite(x)) fail("non-finite value: '" + tok + "'");
  return x;
}

long parse_int(const std::string& tok, const std::function<void(const std::string&)>& fail) {
  char* end = nullptr;
  const long x = std::strtol(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || tok.empty())
    fail("not an integer: '" + tok + "'");
  return x;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void validate(const ExperimentConfig& c, const std::string& origin) {
  const auto fail = [&](const std::string& m) {
    throw ConfigError(origin + ": " + m);
  };
  if (c.schema_version != 1)
    fail("unsupported schema_version " + std::to_string(c.schema_version) +
         " (this tool reads version 1)");
  if (!(c.c3_GHz_um3 >= 0)) fail("physics.c3 must be non-negative");
  if (!(c.guard_um > 0)) fail("physics.guard_radius must be positive");
  if (!(c.quantization_axis.norm() > 0))
    fail("physics.quantization_axis must be a non-zero vector");
  if (!(c.mobile_depth_mK >= 0)) fail("trap.mobile_depth must be non-negative");
  if (!(c.static_depth_mK >= 0)) fail("trap.static_depth must be non-negative");
  if (!(c.sigma_um > 0)) fail("trap.sigma must be positive");
  if (!(c.duration_us > 0)) fail("horizon.duration must be positive");
  if (!(c.dt_us > 0)) fail("horizon.dt must be positive");
  if (c.samples < 4) fail("horizon.samples must be at least 4");
  if (!(c.chi_r >= 0 && c.chi_p >= 0 && c.chi_psi >= 0 && c.chi_dy >= 0))
    fail("weights.chi_* must be non-negative");
  if (!(c.nu_x >= 0 && c.nu_y >= 0)) fail("weights.nu_* must be non-negative");
  if (!(c.init_radius_um > 0)) fail("init.radius must be positive");
  if (!(c.init_distance_um >= 0))
    fail("init.distance must be non-negative (0 keeps the loop's far point "
         "at the start position)");
  if (c.init_height_um == 0.0) fail("init.height must be nonzero");
  if (!(c.init_width_um >= 0)) fail("init.width must be non-negative");
  if (c.max_iters < 1) fail("optimizer.max_iters must be at least 1");
  if (!(c.grad_tol >= 0)) fail("optimizer.grad_tol must be non-negative");
  if (!(c.step0 > 0)) fail("optimizer.step0 must be positive");
  if (!(c.armijo_c > 0 && c.armijo_c < 1))
    fail("optimizer.armijo_c must lie in (0, 1)");
  if (!(c.backtrack > 0 && c.backtrack < 1))
    fail("optimizer.backtrack must lie in (0, 1)");
  if (c.max_backtracks < 1) fail("optimizer.max_backtracks must be at least 1");
  if (!(c.momentum_beta >= 0 && c.momentum_beta < 1))
    fail("optimizer.momentum_beta must lie in [0, 1)");
  if (!(c.step_growth >= 1)) fail("optimizer.step_growth must be at least 1");
  if (!(c.scan_r_step_um > 0 && c.scan_d_step_um > 0))
    fail("scan steps must be positive");
  if (c.scan_r_max_um < c.scan_r_min_um) fail("scan.r_max must be >= scan.r_min");
  if (c.scan_d_max_um < c.scan_d_min_um) fail("scan.d_max must be >= scan.d_min");
  if (c.scan_workers < 0) fail("scan.workers must be non-negative");
  if (!(c.bath_temperature_mK >= 0))
    fail("noise.temperature must be non-negative");
  if (!(c.bath_lambda_per_ms >= 0)) fail("noise.lambda must be non-negative");
  if (c.noise_realizations < 1)
    fail("noise.realizations must be at least 1");
  if (!(c.escape_sigmas > 0)) fail("noise.escape_sigmas must be positive");
  if (c.noise_workers < 0) fail("noise.workers must be non-negative");
  if (c.output_prefix.empty()) fail("output.prefix must not be empty");
  if ((c.start_pos_um - c.static_pos_um).norm() <= c.guard_um)
    fail("trap.start_position must sit outside the guard radius around "
         "trap.static_position");
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  std::string line;
  int lineno = 0;

  const auto fail_at = [&](const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail_at("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail_at("missing key before '='");

    const KeyDef* def = find_key(key);
    if (!def) fail_at("unknown key '" + key + "'");
    const auto prev = seen.find(key);
    if (prev != seen.end())
      fail_at("duplicate key '" + key + "' (first set at line " +
              std::to_string(prev->second) + ")");
    seen[key] = lineno;

    const std::vector<std::string> tok = tokens_of(val);
    const size_t n_values = def->kind == Kind::vec2 ? 2 : 1;
    const size_t n_expect = n_values + (def->unit ? 1 : 0);
    if (tok.size() != n_expect) {
      std::ostringstream msg;
      msg << "key '" << key << "' expects " << n_values
          << (n_values == 1 ? " value" : " values");
      if (def->unit) msg << " followed by unit '" << def->unit << "'";
      fail_at(msg.str());
    }
    if (def->unit && tok.back() != def->unit)
      fail_at("key '" + key + "' must carry unit '" + def->unit + "' (got '" +
              tok.back() + "')");

    const std::function<void(const std::string&)> bad = [&](const std::string& m) {
      fail_at(m);
    };
    switch (def->kind) {
      case Kind::real:
        cfg.*(def->d) = parse_real(tok[0], bad);
        break;
      case Kind::integer: {
        const long x = parse_int(tok[0], bad);
        cfg.*(def->i) = static_cast<int>(x);
        break;
      }
      case Kind::boolean: {
        if (tok[0] == "true" || tok[0] == "1")
          cfg.*(def->b) = true;
        else if (tok[0] == "false" || tok[0] == "0")
          cfg.*(def->b) = false;
        else
          fail_at("key '" + key + "' expects true/false");
        break;
      }
      case Kind::word: {
        if (!def->allowed.empty()) {
          bool ok = false;
          for (const auto& a : def->allowed) ok = ok || a == tok[0];
          if (!ok) {
            std::ostringstream msg;
            msg << "key '" << key << "' must be one of {";
            for (size_t k = 0; k < def->allowed.size(); ++k)
              msg << (k ? ", " : "") << def->allowed[k];
            msg << "}";
            fail_at(msg.str());
          }
        }
        cfg.*(def->s) = tok[0];
        break;
      }
      case Kind::vec2: {
        (cfg.*(def->v)).x() = parse_real(tok[0], bad);
        (cfg.*(def->v)).y() = parse_real(tok[1], bad);
        break;
      }
    }
    if (def->present) cfg.*(def->present) = true;
  }

  if (!seen.count("schema_version"))
    throw ConfigError(origin + ": missing required key 'schema_version'");
  validate(cfg, origin);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "# aaphase experiment description (canonical form, schema 1)\n";
  std::string prev_section;
  for (const auto& def : registry()) {
    if (def.present && !(cfg.*(def.present))) continue;
    const std::string key = def.key;
    const auto dot = key.find('.');
    const std::string section = dot == std::string::npos ? "" : key.substr(0, dot);
    if (section != prev_section) {
      out << "\n";
      prev_section = section;
    }
    out << key << " = ";
    switch (def.kind) {
      case Kind::real:
        out << fmt17(cfg.*(def.d));
        break;
      case Kind::integer:
        out << cfg.*(def.i);
        break;
      case Kind::boolean:
        out << (cfg.*(def.b) ? "true" : "false");
        break;
      case Kind::word:
        out << cfg.*(def.s);
        break;
      case Kind::vec2:
        out << fmt17((cfg.*(def.v)).x()) << " " << fmt17((cfg.*(def.v)).y());
        break;
    }
    if (def.unit) out << " " << def.unit;
    out << "\n";
  }
  return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = serialize_config(cfg);
  uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

double ExperimentConfig::mass_internal() const {
  // The registry restricts species already; keep the check for configs built
  // programmatically.
  if (species != "Rb87")
    throw ConfigError("unsupported species '" + species + "'");
  return units::rb87_mass_internal;
}

double ExperimentConfig::c3_internal() const {
  return c3_GHz_um3 * units::GHzum3_to_internal;
}

Eigen::Vector2d ExperimentConfig::axis_unit() const {
  return quantization_axis.normalized();
}

Eigen::Vector4d ExperimentConfig::psi0_re() const {
  static const std::map<std::string, int> index = {
      {"dd", 0}, {"pf1", 1}, {"pf2", 2}, {"pf3", 3}};
  Eigen::Vector4d e = Eigen::Vector4d::Zero();
  e[index.at(initial_state)] = 1.0;
  return e;
}

SystemModel ExperimentConfig::make_model() const {
  TweezerField mobile;
  mobile.depth = mobile_depth_mK * units::mK_to_radus;
  mobile.sigma = sigma_um;
  mobile.mobile = true;
  TweezerField fixed;
  fixed.depth = static_depth_mK * units::mK_to_radus;
  fixed.sigma = sigma_um;
  fixed.center = static_pos_um;
  SystemModel model{
      DipoleInteraction(c3_internal(), axis_unit(), guard_um),
      FieldSet({mobile, fixed}),
      mass_internal(),
  };
  return model;
}

AtomPairState ExperimentConfig::make_initial_state() const {
  AtomPairState s;
  s.r1 = start_pos_um;
  s.r2 = static_pos_um;
  s.psi_re = psi0_re();
  if (init_launch) s.p1 = mass_internal() * init_velocity();
  return s;
}

IntegrateOptions ExperimentConfig::make_integrate_options() const {
  IntegrateOptions o;
  o.dt = dt_us;
  return o;
}

ObjectiveSpec ExperimentConfig::make_objective() const {
  ObjectiveSpec spec;
  spec.chi_r = chi_r;
  spec.chi_p = chi_p;
  spec.chi_psi = chi_psi;
  spec.chi_dy = chi_dy;
  spec.nu = Eigen::Vector2d(nu_x, nu_y);
  spec.angle = phase_target == "geometric" ? PhaseAngle::geometric
                                           : PhaseAngle::dynamical;
  spec.convention = adjoint_pairing == "alternate" ? AdjointConvention::alternate
                                                   : AdjointConvention::derived;
  return spec;
}

ObjectiveSpec ExperimentConfig::make_scan_objective() const {
  ObjectiveSpec spec = make_objective();
  if (has_scan_chi_r) spec.chi_r = scan_chi_r;
  if (has_scan_chi_p) spec.chi_p = scan_chi_p;
  if (has_scan_chi_psi) spec.chi_psi = scan_chi_psi;
  if (has_scan_chi_dy) spec.chi_dy = scan_chi_dy;
  return spec;
}

DescentOptions ExperimentConfig::make_descent_options() const {
  DescentOptions d;
  d.max_iters = max_iters;
  d.grad_tol = grad_tol;
  d.step0 = step0;
  d.armijo_c = armijo_c;
  d.backtrack = backtrack;
  d.max_backtracks = max_backtracks;
  d.nesterov = nesterov;
  d.momentum_beta = momentum_beta;
  d.step_growth = step_growth;
  return d;
}

ScanRequest ExperimentConfig::make_scan_request() const {
  ScanRequest r;
  r.r_min = scan_r_min_um;
  r.r_max = scan_r_max_um;
  r.r_step = scan_r_step_um;
  r.d_min = scan_d_min_um;
  r.d_max = scan_d_max_um;
  r.d_step = scan_d_step_um;
  r.workers = scan_workers;
  r.ccw = init_ccw;
  return r;
}

BathSpec ExperimentConfig::make_bath() const {
  BathSpec b;
  b.temperature_mK = bath_temperature_mK;
  b.lambda_per_us = bath_lambda_per_ms * 1.0e-3;
  b.escape_sigmas = escape_sigmas;
  return b;
}

namespace {

// Raised-cosine bump peaking at loop phase a = 0; used to warp a recentered
// circle so the sampled loop still passes through the start position.
double warp_bump(double a) { return 0.5 * (1.0 + std::cos(a)); }
double warp_bump_dd(double a) { return -0.5 * std::cos(a); }

// Displacement at which a Gaussian trap of depth V0 and waist sigma exerts
// the radial force f; capped at the force peak sigma/sqrt(2).
double trap_offset_for_force(double f, double v0, double sigma) {
  if (!(f > 0.0) || !(v0 > 0.0)) return 0.0;
  const double peak = std::sqrt(2.0) * v0 / sigma * std::exp(-0.5);
  if (f >= peak) return sigma / std::sqrt(2.0);
  double lo = 0.0, hi = sigma / std::sqrt(2.0);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm =
        2.0 * v0 * mid / (sigma * sigma) * std::exp(-mid * mid / (sigma * sigma));
    (fm < f ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ControlSignal ExperimentConfig::make_initial_control() const {
  const Eigen::Vector2d A = start_pos_um;
  const Eigen::Vector2d B = static_pos_um;
  const Eigen::Vector2d uhat = (A - B).normalized();
  const double omega = 2.0 * units::pi / duration_us;  // loop phase rate
  const double sgn = init_ccw ? 1.0 : -1.0;
  Eigen::Matrix2Xd knots;
  Eigen::Matrix2Xd accel(2, samples + 1);  // analytic loop acceleration
  if (init_shape == "circle") {
    // A circle whose far point (seen from the static atom) is A, or -- when
    // init.distance is set -- one recentered there and warped radially by a
    // raised-cosine bump so the loop still starts and ends at A.
    const Eigen::Vector2d center = init_distance_um > 0.0
                                       ? (B + init_distance_um * uhat).eval()
                                       : (A - init_radius_um * uhat).eval();
    const double delta =
        init_distance_um > 0.0 ? (A - center).norm() - init_radius_um : 0.0;
    knots = circle_loop_samples(center, init_radius_um, uhat, init_ccw, samples);
    for (int k = 0; k <= samples; ++k) {
      const double a = 2.0 * units::pi * (k % samples) / samples;
      const Eigen::Vector2d er = (knots.col(k) - center) / init_radius_um;
      const Eigen::Vector2d et(-er.y(), er.x());
      const double rho = init_radius_um + delta * warp_bump(a);
      const double rho_dd = delta * warp_bump_dd(a) * omega * omega;
      knots.col(k) = center + rho * er;
      // d^2/dt^2 [rho(t) er(t)]; the mixed rho'-term vanishes at the bump
      // peak and stays negligible elsewhere for the gentle warps used here.
      accel.col(k) = (rho_dd - rho * omega * omega) * er +
                     2.0 * delta * (-0.5 * std::sin(a)) * omega * omega * sgn * et;
    }
  } else {
    // Thin loop from A reaching toward the static atom.
    knots = ellipse_loop_samples(A, -uhat, init_height_um, init_width_um,
                                 init_ccw, samples);
    const Eigen::Vector2d m = -uhat;
    const Eigen::Vector2d p(-m.y(), m.x());
    for (int k = 0; k <= samples; ++k) {
      const double a = 2.0 * units::pi * (k % samples) / samples;
      accel.col(k) = omega * omega *
                     (0.5 * init_height_um * std::cos(a) * m -
                      sgn * init_width_um * std::sin(a) * p);
    }
  }
  if (init_feedforward) {
    // Displace each knot along the demanded acceleration so the trap force
    // at the offset supplies it; the atom then tracks the loop with little
    // lag instead of sloshing toward escape.
    const double v0 = mobile_depth_mK * units::mK_to_radus;
    const double m = mass_internal();
    for (int k = 0; k <= samples; ++k) {
      const double demand = m * accel.col(k).norm();
      const double s = trap_offset_for_force(demand, v0, sigma_um);
      if (s > 0.0) knots.col(k) += s * accel.col(k).normalized();
    }
  }
  return ControlSignal(duration_us, knots);
}

Eigen::Vector2d ExperimentConfig::init_velocity() const {
  const Eigen::Vector2d A = start_pos_um;
  const Eigen::Vector2d B = static_pos_um;
  const Eigen::Vector2d uhat = (A - B).normalized();
  const double omega = 2.0 * units::pi / duration_us;
  const double sgn = init_ccw ? 1.0 : -1.0;
  if (init_shape == "circle") {
    const double rho0 =
        init_distance_um > 0.0 ? (A - (B + init_distance_um * uhat)).norm()
                               : init_radius_um;
    const Eigen::Vector2d et(-uhat.y(), uhat.x());
    return rho0 * omega * sgn * et;  // bump slope is zero at the start knot
  }
  const Eigen::Vector2d m = -uhat;
  const Eigen::Vector2d p(-m.y(), m.x());
  return omega * sgn * init_width_um * p;
}

}  // namespace aa
