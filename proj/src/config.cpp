#include "ymflow/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include <fmt/format.h>

namespace ymflow {

namespace {

std::string config_message(const std::string& source, int line, const std::string& field,
                           const std::string& message) {
  if (line > 0) return fmt::format("{}:{}: field '{}': {}", source, line, field, message);
  return fmt::format("{}: field '{}': {}", source, field, message);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

// Thrown by the value parsers; the caller adds line and field.
struct BadValue {
  std::string message;
};

double to_double(const std::string& w) {
  double x = 0.0;
  const char* end = w.data() + w.size();
  const auto [p, ec] = std::from_chars(w.data(), end, x);
  if (ec != std::errc() || p != end || !std::isfinite(x)) throw BadValue{fmt::format("'{}' is not a finite number", w)};
  return x;
}

long long to_integer(const std::string& w) {
  long long x = 0;
  const char* end = w.data() + w.size();
  const auto [p, ec] = std::from_chars(w.data(), end, x);
  if (ec != std::errc() || p != end) throw BadValue{fmt::format("'{}' is not an integer", w)};
  return x;
}

double one_double(const std::string& v) {
  const auto w = words(v);
  if (w.size() != 1) throw BadValue{"expected one number"};
  return to_double(w[0]);
}

int one_int(const std::string& v) {
  const auto w = words(v);
  if (w.size() != 1) throw BadValue{"expected one integer"};
  const long long x = to_integer(w[0]);
  if (x < -1000000000LL || x > 1000000000LL) throw BadValue{"integer out of range"};
  return static_cast<int>(x);
}

std::vector<double> doubles(const std::string& v) {
  std::vector<double> out;
  for (const auto& w : words(v)) out.push_back(to_double(w));
  if (out.empty()) throw BadValue{"expected at least one number"};
  return out;
}

bool boolean(const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw BadValue{fmt::format("'{}' is not true or false", t)};
}

std::vector<std::vector<double>> point_list(const std::string& v) {
  std::vector<std::vector<double>> out;
  std::istringstream is(v);
  for (std::string part; std::getline(is, part, ';');) {
    if (trim(part).empty()) continue;
    out.push_back(doubles(part));
  }
  if (out.empty()) throw BadValue{"expected at least one point"};
  return out;
}

Cadence cadence_value(const std::string& v) {
  const auto w = words(v);
  if (w.size() == 1 && w[0] == "every-step") return Cadence::every_step();
  if (w.size() == 2 && w[0] == "uniform") {
    const double dt = to_double(w[1]);
    if (dt <= 0) throw BadValue{"uniform spacing must be positive"};
    return Cadence::uniform(dt);
  }
  if (w.size() == 3 && w[0] == "log") {
    const double first = to_double(w[1]);
    const long long count = to_integer(w[2]);
    if (first <= 0 || count < 1 || count > 1000000) throw BadValue{"log cadence needs first > 0 and count >= 1"};
    return Cadence::log(first, static_cast<int>(count));
  }
  throw BadValue{"expected 'uniform <dt>', 'log <first> <count>' or 'every-step'"};
}

DataKind data_value(const std::string& v) {
  const std::string t = trim(v);
  if (t == "flat") return DataKind::Flat;
  if (t == "abelian-mode") return DataKind::AbelianMode;
  if (t == "instanton") return DataKind::Instanton;
  if (t == "vortex") return DataKind::Vortex;
  if (t == "random") return DataKind::Random;
  if (t == "file") return DataKind::File;
  if (t == "synthetic-density") return DataKind::SyntheticDensity;
  throw BadValue{fmt::format("unknown data kind '{}'", t)};
}

}  // namespace

ConfigError::ConfigError(std::string source, int line, std::string field, const std::string& message)
    : ValidationError(config_message(source, line, field, message)),
      source_(std::move(source)),
      line_(line),
      field_(std::move(field)) {}

RunConfig parse_config(std::istream& is, const std::string& source) {
  RunConfig c;
  c.source = source;
  // Points are parsed once n is known.
  std::vector<std::vector<double>> centers_raw, blowup_raw;

  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> keys = {
      {"version", [&](const std::string& v) { c.version = one_int(v); }},
      {"grid.n", [&](const std::string& v) { c.n = one_int(v); }},
      {"grid.N", [&](const std::string& v) { c.N = one_int(v); }},
      {"grid.L", [&](const std::string& v) { c.L = one_double(v); }},
      {"algebra.m", [&](const std::string& v) { c.m = one_int(v); }},
      {"data", [&](const std::string& v) { c.data = data_value(v); }},
      {"data.k", [&](const std::string& v) { c.k = doubles(v); }},
      {"data.v", [&](const std::string& v) { c.v = doubles(v); }},
      {"data.epsilon", [&](const std::string& v) { c.epsilon = one_double(v); }},
      {"data.rho", [&](const std::string& v) { c.rho = one_double(v); }},
      {"data.center", [&](const std::string& v) { c.center = doubles(v); }},
      {"data.support", [&](const std::string& v) { c.support = one_double(v); }},
      {"data.radius", [&](const std::string& v) { c.radius = one_double(v); }},
      {"data.amplitude", [&](const std::string& v) { c.amplitude = one_double(v); }},
      {"data.modes", [&](const std::string& v) { c.modes = one_int(v); }},
      {"data.path", [&](const std::string& v) { c.path = trim(v); }},
      {"data.profile", [&](const std::string& v) { c.profile = trim(v); }},
      {"data.blowup_time", [&](const std::string& v) { c.blowup_time = one_double(v); }},
      {"flow.t_end", [&](const std::string& v) { c.t_end = one_double(v); }},
      {"flow.cadence", [&](const std::string& v) { c.cadence = cadence_value(v); }},
      {"flow.c_cfl", [&](const std::string& v) { c.c_cfl = one_double(v); }},
      {"flow.dt", [&](const std::string& v) { c.fixed_dt = one_double(v); }},
      {"threads", [&](const std::string& v) { c.threads = one_int(v); }},
      {"seed",
       [&](const std::string& v) {
         const long long s = to_integer(trim(v));
         if (s < 0) throw BadValue{"seed must be >= 0"};
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"output", [&](const std::string& v) { c.output = trim(v); }},
      {"trajectory", [&](const std::string& v) { c.trajectory = trim(v); }},
      {"entropy.centers", [&](const std::string& v) { centers_raw = point_list(v); }},
      {"entropy.radii", [&](const std::string& v) { c.entropy_radii = doubles(v); }},
      {"entropy.iota", [&](const std::string& v) { c.entropy_iota = one_double(v); }},
      {"entropy.tolerance", [&](const std::string& v) { c.entropy_tol = one_double(v); }},
      {"entropy.intervals", [&](const std::string& v) { c.entropy_intervals = one_int(v); }},
      {"entropy.soliton", [&](const std::string& v) { c.entropy_soliton = boolean(v); }},
      {"entropy.c_max", [&](const std::string& v) { c.c_max = one_double(v); }},
      {"blowup.center", [&](const std::string& v) { blowup_raw = point_list(v); }},
      {"blowup.lambdas", [&](const std::string& v) { c.blowup_lambdas = doubles(v); }},
      {"blowup.samples", [&](const std::string& v) { c.blowup_samples = one_int(v); }},
      {"blowup.radius", [&](const std::string& v) { c.blowup_radius = one_double(v); }},
      {"blowup.tangent_radius", [&](const std::string& v) { c.tangent_radius = one_double(v); }},
      {"blowup.tangent_depth", [&](const std::string& v) { c.tangent_depth = one_double(v); }},
      {"blowup.tangent_layers", [&](const std::string& v) { c.tangent_layers = one_int(v); }},
      {"blowup.tangent_cells", [&](const std::string& v) { c.tangent_cells = one_int(v); }},
      {"scan.epsilons", [&](const std::string& v) { c.scan_epsilons = doubles(v); }},
      {"scan.radii", [&](const std::string& v) { c.scan_radii = doubles(v); }},
      {"scan.stride", [&](const std::string& v) { c.scan_stride = one_int(v); }},
      {"scan.times", [&](const std::string& v) { c.scan_times = doubles(v); }},
      {"scan.time_stride", [&](const std::string& v) { c.scan_time_stride = one_double(v); }},
      {"scan.delta", [&](const std::string& v) { c.scan_delta = one_double(v); }},
      {"scan.box_radii", [&](const std::string& v) { c.box_radii = doubles(v); }},
      {"stratify.input", [&](const std::string& v) { c.stratify_input = trim(v); }},
      {"stratify.tolerance", [&](const std::string& v) { c.stratify_tol = one_double(v); }},
      {"verify.gradient_tolerance", [&](const std::string& v) { c.gradient_tol = one_double(v); }},
      {"verify.energy_tolerance", [&](const std::string& v) { c.energy_tol = one_double(v); }},
      {"verify.dilation_tolerance", [&](const std::string& v) { c.dilation_tol = one_double(v); }},
      {"verify.samples", [&](const std::string& v) { c.verify_samples = one_int(v); }},
  };

  std::map<std::string, int> line_of;
  std::string text;
  for (int line = 1; std::getline(is, text); ++line) {
    const auto hash = text.find('#');
    if (hash != std::string::npos) text.resize(hash);
    if (trim(text).empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line, trim(text), "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError(source, line, key, "unknown key");
    if (line_of.count(key)) throw ConfigError(source, line, key, fmt::format("duplicate key (first on line {})", line_of[key]));
    if (value.empty()) throw ConfigError(source, line, key, "empty value");
    line_of[key] = line;
    try {
      it->second(value);
    } catch (const BadValue& e) {
      throw ConfigError(source, line, key, e.message);
    }
    c.raw[key] = value;
  }

  auto fail = [&](const std::string& key, const std::string& message) {
    const auto it = line_of.find(key);
    throw ConfigError(source, it == line_of.end() ? 0 : it->second, key, message);
  };
  auto require = [&](bool ok, const std::string& key, const std::string& message) {
    if (!ok) fail(key, message);
  };

  require(line_of.count("version") == 1, "version", "required");
  require(c.version == 1, "version", fmt::format("unsupported version {} (expected 1)", c.version));
  require(c.n >= 1 && c.n <= 8, "grid.n", "must be between 1 and 8");
  require(c.N >= 8, "grid.N", "must be at least 8");
  require(c.L > 0, "grid.L", "must be positive");
  require(c.m >= 2, "algebra.m", "must be at least 2");
  const auto n = static_cast<std::size_t>(c.n);

  switch (c.data) {
    case DataKind::AbelianMode: {
      require(c.k.size() == n, "data.k", fmt::format("needs {} components", n));
      require(c.v.size() == n, "data.v", fmt::format("needs {} components", n));
      double kv = 0, kk = 0, vv = 0;
      for (std::size_t i = 0; i < n; ++i) {
        kv += c.k[i] * c.v[i];
        kk += c.k[i] * c.k[i];
        vv += c.v[i] * c.v[i];
      }
      require(std::abs(kv) <= 1e-12 * std::sqrt(kk * vv), "data.v", "must be orthogonal to data.k");
      break;
    }
    case DataKind::Instanton:
      require(c.n == 4, "grid.n", "instanton data needs n = 4");
      require(c.m == 3, "algebra.m", "instanton data needs m = 3");
      require(c.rho > 0, "data.rho", "must be positive");
      require(c.support > 0, "data.support", "must be positive");
      require(c.center.size() == n, "data.center", fmt::format("needs {} components", n));
      break;
    case DataKind::Vortex:
      require(c.n >= 2, "grid.n", "vortex data needs n >= 2");
      require(c.radius > 0, "data.radius", "must be positive");
      require(c.center.size() == n, "data.center", fmt::format("needs {} components", n));
      break;
    case DataKind::Random:
      require(c.amplitude > 0, "data.amplitude", "must be positive");
      require(c.modes >= 1, "data.modes", "must be at least 1");
      break;
    case DataKind::File:
      require(!c.path.empty(), "data.path", "required for file data");
      break;
    case DataKind::SyntheticDensity:
      require(c.profile == "self-similar", "data.profile", "only 'self-similar' is available");
      require(c.center.size() == n, "data.center", fmt::format("needs {} components", n));
      require(c.blowup_time > 0, "data.blowup_time", "must be positive");
      require(c.amplitude > 0, "data.amplitude", "must be positive");
      break;
    case DataKind::Flat:
      break;
  }

  require(c.t_end > 0, "flow.t_end", "must be positive");
  require(c.c_cfl > 0, "flow.c_cfl", "must be positive");
  require(c.fixed_dt >= 0, "flow.dt", "must be >= 0");
  require(c.threads >= 1, "threads", "must be at least 1");
  require(!c.output.empty(), "output", "must not be empty");

  for (const auto& p : centers_raw) {
    require(p.size() == n + 1, "entropy.centers", fmt::format("each centre needs {} numbers (x and t)", n + 1));
    c.entropy_centers.push_back({Point(p.begin(), p.end() - 1), p.back()});
  }
  for (double r : c.entropy_radii) require(r > 0, "entropy.radii", "must be positive");
  require(c.entropy_iota >= 0, "entropy.iota", "must be >= 0");
  require(c.entropy_tol > 0, "entropy.tolerance", "must be positive");
  require(c.entropy_intervals >= 8 && c.entropy_intervals % 2 == 0, "entropy.intervals", "must be even and >= 8");
  require(c.c_max > 0, "entropy.c_max", "must be positive");

  if (!blowup_raw.empty()) {
    require(blowup_raw.size() == 1, "blowup.center", "expected a single point");
    require(blowup_raw[0].size() == n + 1, "blowup.center", fmt::format("needs {} numbers (x and t)", n + 1));
    c.blowup_center = {Point(blowup_raw[0].begin(), blowup_raw[0].end() - 1), blowup_raw[0].back()};
  } else {
    c.blowup_center = {Point(n, 0.5 * c.L), c.t_end};
  }
  for (double l : c.blowup_lambdas) require(l > 0, "blowup.lambdas", "must be positive");
  require(c.blowup_samples >= 0, "blowup.samples", "must be >= 0");
  require(c.blowup_radius >= 0, "blowup.radius", "must be >= 0");
  require(c.tangent_radius > 0, "blowup.tangent_radius", "must be positive");
  require(c.tangent_depth > 0, "blowup.tangent_depth", "must be positive");
  require(c.tangent_layers >= 1, "blowup.tangent_layers", "must be at least 1");
  require(c.tangent_cells >= 1, "blowup.tangent_cells", "must be at least 1");

  for (double e : c.scan_epsilons) require(e > 0, "scan.epsilons", "must be positive");
  for (double r : c.scan_radii) require(r > 0, "scan.radii", "must be positive");
  require(c.scan_stride >= 1, "scan.stride", "must be at least 1");
  require(c.scan_time_stride >= 0, "scan.time_stride", "must be >= 0");
  require(c.scan_delta > 0 && c.scan_delta <= 1, "scan.delta", "must lie in (0, 1]");
  for (double r : c.box_radii) require(r > 0, "scan.box_radii", "must be positive");
  require(c.stratify_tol > 0, "stratify.tolerance", "must be positive");
  require(c.gradient_tol > 0, "verify.gradient_tolerance", "must be positive");
  require(c.energy_tol >= 0, "verify.energy_tolerance", "must be >= 0");
  require(c.dilation_tol >= 0, "verify.dilation_tolerance", "must be >= 0");
  require(c.verify_samples >= 1, "verify.samples", "must be at least 1");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path, 0, "config", "cannot open file");
  return parse_config(is, path);
}

std::map<std::string, double> config_tolerances(const RunConfig& c) {
  return {{"entropy.tolerance", c.entropy_tol},
          {"entropy.c_max", c.c_max},
          {"stratify.tolerance", c.stratify_tol},
          {"verify.gradient_tolerance", c.gradient_tol},
          {"verify.energy_tolerance", c.energy_tol},
          {"verify.dilation_tolerance", c.dilation_tol}};
}

}  // namespace ymflow
