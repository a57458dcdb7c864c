#include "peri/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "peri/errors.hpp"

namespace peri {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::random_velocity: return "random_velocity";
    case ExperimentKind::uniaxial_load: return "uniaxial_load";
    case ExperimentKind::custom: return "custom";
  }
  return "unknown";
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad(std::string_view key, const std::string& msg) {
  throw ConfigError("config key '" + std::string(key) + "': " + msg);
}

double to_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    bad(key, "expected a finite number, got '" + s + "'");
  }
  return v;
}

long long to_integer(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    bad(key, "expected an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE) {
    bad(key, "expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  bad(key, "expected true or false, got '" + s + "'");
}

Vec3 to_vec3(std::string_view key, std::string_view text) {
  double c[3];
  std::size_t start = 0;
  for (int k = 0; k < 3; ++k) {
    const auto comma = text.find(',', start);
    if ((k < 2) == (comma == std::string_view::npos)) bad(key, "expected three comma-separated values");
    c[k] = to_double(key, text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    start = comma + 1;
  }
  return {c[0], c[1], c[2]};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const Vec3& v) { return fmt(v.x) + "," + fmt(v.y) + "," + fmt(v.z); }

}  // namespace

double ExperimentConfig::resolved_t_end() const {
  if (t_end) return *t_end;
  return kind == ExperimentKind::uniaxial_load ? 10.0 : 3.0;
}

long ExperimentConfig::num_steps() const {
  return std::lround(resolved_t_end() / integrator.dt);
}

void ExperimentConfig::validate() const {
  if (mesh_path.empty()) {
    if (icosphere_level < 0 || icosphere_level > 7) bad("icosphere_level", "must lie in [0, 7]");
    if (!(icosphere_radius > 0.0)) bad("icosphere_radius", "must be positive");
  }
  if (!(params.p >= 2.0)) bad("p", "must satisfy p >= 2, got " + fmt(params.p));
  if (!(params.alpha > 0.0 && params.alpha < 1.0)) {
    bad("alpha", "must lie in the open interval (0, 1), got " + fmt(params.alpha));
  }
  if (!(params.kappa > 0.0)) bad("kappa", "must be positive");
  if (!(params.horizon > 0.0)) bad("delta", "must be positive");
  for (double r : params.rho) {
    if (!(r > 0.0)) bad("rho", "must be positive");
  }
  if (!(params.k_pair.uniform() > 0.0)) bad("k_pair", "must be positive");
  if (!(integrator.dt > 0.0)) bad("dt", "must be positive");
  if (!(integrator.beta >= 0.0 && integrator.beta <= 0.5)) bad("beta", "must lie in [0, 1/2]");
  if (!(integrator.gamma >= 0.0 && integrator.gamma <= 1.0)) bad("gamma", "must lie in [0, 1]");
  if (!(integrator.eps > 0.0)) bad("eps", "must be positive");
  if (integrator.max_iters < 1) bad("max_iters", "must be at least 1");
  if (!(resolved_t_end() > 0.0)) bad("t_end", "must be positive");
  if (num_steps() < 1) bad("t_end", "shorter than one time step");
  if (!(v0_magnitude >= 0.0)) bad("v0_magnitude", "must be non-negative");
  if (kind == ExperimentKind::uniaxial_load) {
    if (!(load_magnitude >= 0.0)) bad("load_magnitude", "must be non-negative");
    if (!(load_axis_tolerance > 0.0)) bad("load_axis_tolerance", "must be positive");
  }
  if (snapshot_every < 0) bad("snapshot_every", "must be non-negative");
  if (record_every < 1) bad("record_every", "must be at least 1");
  if (threads < 1) bad("threads", "must be at least 1");
}

void apply_setting(ExperimentConfig& c, std::string_view key_in, std::string_view value_in) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  auto positive_int = [&](long long lo, long long hi) {
    const long long v = to_integer(key, value);
    if (v < lo || v > hi) bad(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  };

  if (key == "mesh") c.mesh_path = value;
  else if (key == "icosphere_level") c.icosphere_level = static_cast<int>(positive_int(0, 7));
  else if (key == "icosphere_radius") c.icosphere_radius = to_double(key, value);
  else if (key == "p") c.params.p = to_double(key, value);
  else if (key == "alpha") c.params.alpha = to_double(key, value);
  else if (key == "kappa") c.params.kappa = to_double(key, value);
  else if (key == "delta") c.params.horizon = to_double(key, value);
  else if (key == "rho") c.params.rho = {to_double(key, value)};
  else if (key == "k_pair") c.params.k_pair = PairModuli(to_double(key, value));
  else if (key == "dt") c.integrator.dt = to_double(key, value);
  else if (key == "beta") c.integrator.beta = to_double(key, value);
  else if (key == "gamma") c.integrator.gamma = to_double(key, value);
  else if (key == "eps") c.integrator.eps = to_double(key, value);
  else if (key == "max_iters") c.integrator.max_iters = static_cast<int>(positive_int(1, 1000000));
  else if (key == "strict_paper_predictor") c.integrator.strict_paper_predictor = to_bool(key, value);
  else if (key == "experiment") {
    if (value == "random_velocity") c.kind = ExperimentKind::random_velocity;
    else if (value == "uniaxial_load") c.kind = ExperimentKind::uniaxial_load;
    else if (value == "custom") c.kind = ExperimentKind::custom;
    else bad(key, "expected random_velocity, uniaxial_load or custom, got '" + value + "'");
  }
  else if (key == "t_end") c.t_end = to_double(key, value);
  else if (key == "v0_magnitude") c.v0_magnitude = to_double(key, value);
  else if (key == "load_magnitude") c.load_magnitude = to_double(key, value);
  else if (key == "load_axis_tolerance") c.load_axis_tolerance = to_double(key, value);
  else if (key == "seed") c.seed = to_unsigned(key, value);
  else if (key == "initial_displacement") c.initial_displacement = to_vec3(key, value);
  else if (key == "initial_velocity") c.initial_velocity = to_vec3(key, value);
  else if (key == "body_force") c.body_force = to_vec3(key, value);
  else if (key == "out_dir") c.out_dir = value;
  else if (key == "snapshot_every") c.snapshot_every = static_cast<int>(positive_int(0, 1L << 30));
  else if (key == "record_every") c.record_every = static_cast<int>(positive_int(1, 1L << 30));
  else if (key == "threads") c.threads = static_cast<unsigned>(positive_int(1, 1024));
  else if (key == "geodesic_cache") c.geodesic_cache = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config_text(std::string_view text) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value', got '" +
                        trim(line) + "'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError("config key '" + key + "' given twice");
    apply_setting(config, key, std::string_view(line).substr(eq + 1));
  }
  for (const char* required : {"experiment", "p", "alpha"}) {
    if (!seen.count(required)) throw ConfigError(std::string("config key '") + required + "' is required");
  }
  config.validate();
  return config;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string to_config_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "experiment = " << to_string(c.kind) << '\n';
  if (!c.mesh_path.empty()) {
    out << "mesh = " << c.mesh_path.string() << '\n';
  } else {
    out << "icosphere_level = " << c.icosphere_level << '\n'
        << "icosphere_radius = " << fmt(c.icosphere_radius) << '\n';
  }
  out << "p = " << fmt(c.params.p) << '\n'
      << "alpha = " << fmt(c.params.alpha) << '\n'
      << "kappa = " << fmt(c.params.kappa) << '\n'
      << "delta = " << fmt(c.params.horizon) << '\n'
      << "rho = " << fmt(c.params.rho.front()) << '\n'
      << "k_pair = " << fmt(c.params.k_pair.uniform()) << '\n'
      << "dt = " << fmt(c.integrator.dt) << '\n'
      << "beta = " << fmt(c.integrator.beta) << '\n'
      << "gamma = " << fmt(c.integrator.gamma) << '\n'
      << "eps = " << fmt(c.integrator.eps) << '\n'
      << "max_iters = " << c.integrator.max_iters << '\n'
      << "strict_paper_predictor = " << (c.integrator.strict_paper_predictor ? "true" : "false") << '\n'
      << "t_end = " << fmt(c.resolved_t_end()) << '\n'
      << "v0_magnitude = " << fmt(c.v0_magnitude) << '\n'
      << "load_magnitude = " << fmt(c.load_magnitude) << '\n'
      << "load_axis_tolerance = " << fmt(c.load_axis_tolerance) << '\n'
      << "seed = " << c.seed << '\n'
      << "initial_displacement = " << fmt(c.initial_displacement) << '\n'
      << "initial_velocity = " << fmt(c.initial_velocity) << '\n'
      << "body_force = " << fmt(c.body_force) << '\n'
      << "out_dir = " << c.out_dir.string() << '\n'
      << "snapshot_every = " << c.snapshot_every << '\n'
      << "record_every = " << c.record_every << '\n'
      << "threads = " << c.threads << '\n';
  if (!c.geodesic_cache.empty()) out << "geodesic_cache = " << c.geodesic_cache.string() << '\n';
  return out.str();
}

}  // namespace peri
