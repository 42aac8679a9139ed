#include "ymflow/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include <openssl/evp.h>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "ymflow/blowup.hpp"
#include "ymflow/cutoff.hpp"
#include "ymflow/entropy.hpp"
#include "ymflow/errors.hpp"
#include "ymflow/gauge.hpp"
#include "ymflow/initial_data.hpp"
#include "ymflow/parallel.hpp"
#include "ymflow/singular.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ymflow {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

namespace {

std::string read_bytes(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

/// Files written by one command, with their digests, and the inputs it read.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& rel, const std::string& bytes) {
    const fs::path p = dir_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw Error(fmt::format("cannot write '{}'", p.string()));
    files_.push_back({{"path", rel}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
  }

  void input(const std::string& path) { inputs_.push_back({{"path", path}, {"sha256", sha256_file(path)}}); }

  void manifest(const std::string& command, const std::string& config_path, const RunConfig& cfg) {
    json m;
    m["command"] = command;
    m["config"] = {{"path", config_path}, {"sha256", sha256_file(config_path)}};
    m["settings"] = cfg.raw;
    json tol = json::object();
    for (const auto& [k, v] : config_tolerances(cfg)) tol[k] = num(v);
    m["tolerances"] = tol;
    m["workers"] = worker_count();
    m["inputs"] = inputs_;
    m["files"] = files_;
    const std::string text = m.dump(2) + "\n";
    std::ofstream os(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    os << text;
  }

  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  json files_ = json::array();
  json inputs_ = json::array();
};

Grid config_grid(const RunConfig& c) { return Grid(c.n, c.N, c.L); }

ConnectionField initial_connection(const RunConfig& c, Outputs& io) {
  const Grid g = config_grid(c);
  switch (c.data) {
    case DataKind::Flat:
      return ConnectionField(g, c.m);
    case DataKind::AbelianMode:
      return abelian_mode(g, c.m, AbelianMode{c.k, c.epsilon, c.v});
    case DataKind::Instanton:
      return instanton(g, c.rho, c.center, c.support);
    case DataKind::Vortex:
      return abelian_vortex(g, c.m, c.center, c.radius, c.amplitude);
    case DataKind::Random:
      return random_connection(g, c.m, c.amplitude, c.seed, c.modes);
    case DataKind::File: {
      FieldHeader h;
      Field f = read_ymf1(c.path, c.L, &h);
      if (f.grid() != g) throw ConfigError(c.source, 0, "data.path", "grid in file does not match grid.n / grid.N");
      io.input(c.path);
      return ConnectionField(static_cast<int>(h.m), std::move(f));
    }
    case DataKind::SyntheticDensity:
      break;
  }
  throw ConfigError(c.source, 0, "data", "this command needs connection data");
}

RunOptions run_options(const RunConfig& c, std::ostream* series) {
  RunOptions o;
  o.c_cfl = c.c_cfl;
  o.fixed_dt = c.fixed_dt;
  o.series_csv = series;
  return o;
}

/// The density (and, for flows, the connection) an analysis command reads.
struct Source {
  std::unique_ptr<SnapshotStore> store;
  std::unique_ptr<SelfSimilarDensity> analytic;
  std::unique_ptr<SampledDensity> sampled;
  const DensitySource* density = nullptr;
  const ConnectionSource* connection = nullptr;
};

Source acquire(const RunConfig& c, Outputs& io) {
  Source s;
  if (c.data == DataKind::SyntheticDensity) {
    s.analytic = std::make_unique<SelfSimilarDensity>(c.center, c.blowup_time, c.amplitude, c.L);
    s.sampled = std::make_unique<SampledDensity>(*s.analytic, config_grid(c), 0.0, c.blowup_time);
    s.density = s.sampled.get();
    return s;
  }
  if (!c.trajectory.empty()) {
    s.store = std::make_unique<SnapshotStore>(load_trajectory(c.trajectory, c.L));
    if (s.store->grid() != config_grid(c) || s.store->m() != c.m)
      throw ConfigError(c.source, 0, "trajectory", "stored grid or algebra size does not match the config");
    const fs::path dir(c.trajectory);
    io.input((dir / "snapshots" / "index.csv").string());
  } else {
    std::ostringstream series;
    write_series_header(series);
    s.store = std::make_unique<SnapshotStore>(run(initial_connection(c, io), c.t_end, c.cadence, run_options(c, &series)));
    io.write("series.csv", series.str());
  }
  s.density = s.store.get();
  s.connection = s.store.get();
  return s;
}

/// Four dyadic radii below L/32 such that the Psi slab of twice the largest
/// still fits inside the source window.
std::vector<double> default_radii(const RunConfig& c, const DensitySource& src) {
  double top = c.L / 32;
  while (16 * top * top > src.t_max() - src.t_min()) top /= 2;
  std::vector<double> r;
  for (int k = 3; k >= 0; --k) r.push_back(top / std::pow(2.0, k));
  return r;
}

std::vector<SpacetimePoint> default_centers(const RunConfig& c, const DensitySource& src) {
  if (!c.entropy_centers.empty()) return c.entropy_centers;
  return {SpacetimePoint{Point(c.n, 0.5 * c.L), src.t_max()}};
}

Cutoff entropy_cutoff(const RunConfig& c, const Grid& g, const Point& x) {
  return c.entropy_iota > 0 ? Cutoff::bump(g, x, c.entropy_iota) : Cutoff::one(g);
}

double pairing(const ConnectionField& a, const ConnectionField& b) {
  double s = 0.0;
  for (std::size_t site = 0; site < a.grid().sites(); ++site)
    for (int j = 0; j < a.n(); ++j) s += inner(a.gamma(site, j), b.gamma(site, j));
  return s * a.grid().cell_volume();
}

ConnectionField shifted(const ConnectionField& c, double s, const ConnectionField& v) {
  ConnectionField out = c;
  auto d = out.field().data();
  const auto w = v.field().data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s * w[i];
  return out;
}

// ---------------------------------------------------------------- commands

int cmd_run(const RunConfig& c, Outputs& io, std::ostream& out) {
  const ConnectionField init = initial_connection(c, io);
  std::ostringstream series;
  write_series_header(series);
  const SnapshotStore st = run(init, c.t_end, c.cadence, run_options(c, &series));
  io.write("series.csv", series.str());
  std::ostringstream index;
  index << "t,file\n";
  for (std::size_t k = 0; k < st.size(); ++k) {
    const std::string name = fmt::format("snap_{:05d}.ymf", k);
    std::ostringstream bytes;
    write_ymf1(bytes, st.snapshot(k)->field(), st.m());
    io.write("snapshots/" + name, bytes.str());
    index << num(st.times()[k]) << ',' << name << '\n';
  }
  io.write("snapshots/index.csv", index.str());
  json r;
  r["snapshots"] = st.size();
  r["t_final"] = st.times().back();
  r["energy_initial"] = st.series().front().energy;
  r["energy_final"] = st.series().back().energy;
  r["steps"] = st.series().size() - 1;
  if (st.blowup) r["blowup"] = {{"t", st.blowup->t}, {"site", st.blowup->site}};
  else r["blowup"] = nullptr;
  io.write("run.json", r.dump(2) + "\n");
  out << fmt::format("run: {} snapshots, energy {} -> {}\n", st.size(), num(st.series().front().energy),
                     num(st.series().back().energy));
  if (st.blowup) out << fmt::format("run: blowup detected at t = {}\n", num(st.blowup->t));
  return kExitOk;
}

int cmd_entropy(const RunConfig& c, Outputs& io, std::ostream& out) {
  const Source s = acquire(c, io);
  const std::vector<double> radii = c.entropy_radii.empty() ? default_radii(c, *s.density) : c.entropy_radii;
  AuditOptions opt;
  opt.relative_tol = c.entropy_tol;
  opt.slab.intervals = c.entropy_intervals;
  opt.soliton = c.entropy_soliton && s.connection != nullptr;
  json all = json::array();
  const auto centers = default_centers(c, *s.density);
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const Cutoff phi = entropy_cutoff(c, s.density->grid(), centers[k].x);
    const EntropyReport rep = monotonicity_audit(*s.density, centers[k], radii, phi, opt);
    std::ostringstream csv;
    write_report_csv(csv, rep);
    io.write(fmt::format("entropy_{}.csv", k), csv.str());
    json j = json::parse(report_json(rep));
    const SandwichResult sw = phi_psi_equivalence_check(*s.density, centers[k], radii, phi, c.c_max, opt.slab);
    j["sandwich"] = {{"psi_over_phi", sw.psi_over_phi},
                     {"phi_over_psi", sw.phi_over_psi},
                     {"vacuous", sw.vacuous},
                     {"within_bound", sw.within_bound}};
    all.push_back(j);
    out << fmt::format("entropy: centre {} theta {} violations {}\n", k, num(rep.theta_estimate), rep.violations.size());
  }
  io.write("entropy.json", all.dump(2) + "\n");
  return kExitOk;
}

int cmd_blowup(const RunConfig& c, Outputs& io, std::ostream& out) {
  if (c.blowup_lambdas.empty()) throw ConfigError(c.source, 0, "blowup.lambdas", "required for blowup");
  const Source s = acquire(c, io);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  json report;

  if (s.connection) {
    std::ostringstream csv;
    csv << "lambda,max_deviation,max_reference\n";
    for (double lambda : c.blowup_lambdas) {
      const RescaledConnectionView view = rescale_connection(*s.connection, c.blowup_center, lambda);
      std::vector<SpacetimePoint> samples;
      for (int i = 0; i < c.blowup_samples; ++i) {
        Point x(c.n);
        for (double& xi : x) xi = unit(rng) * view.grid().L();
        samples.push_back({x, view.t_min() + unit(rng) * (view.t_max() - view.t_min())});
      }
      const ScalingDeviation d = curvature_scaling_check(view, samples);
      csv << num(lambda) << ',' << num(d.max_deviation) << ',' << num(d.max_reference) << '\n';
    }
    io.write("curvature_scaling.csv", csv.str());
    if (c.blowup_radius > 0) {
      SlabOptions slab;
      slab.intervals = c.entropy_intervals;
      const EntropyScaling e = entropy_scaling_check(*s.connection, c.blowup_center, c.blowup_radius, slab);
      report["entropy_scaling"] = {{"radius", c.blowup_radius},          {"phi_base", e.phi_base},
                                   {"phi_rescaled", e.phi_rescaled},     {"phi_relative", e.phi_relative},
                                   {"psi_base", e.psi_base},             {"psi_rescaled", e.psi_rescaled},
                                   {"psi_relative", e.psi_relative}};
      out << fmt::format("blowup: entropy scaling relative {} / {}\n", num(e.phi_relative), num(e.psi_relative));
    }
  }

  TangentOptions topt;
  topt.radius = c.tangent_radius;
  topt.depth = c.tangent_depth;
  topt.layers = c.tangent_layers;
  topt.cells = c.tangent_cells;
  std::vector<double> lambdas = c.blowup_lambdas;
  std::sort(lambdas.rbegin(), lambdas.rend());
  const TangentSequence seq = s.analytic ? tangent_measure_approx(*s.analytic, c.blowup_center, lambdas, topt)
                                         : tangent_measure_approx(*s.density, c.blowup_center, lambdas, topt);
  for (std::size_t k = 0; k < seq.measures.size(); ++k) {
    std::ostringstream csv;
    write_atoms_csv(csv, seq.measures[k]);
    io.write(fmt::format("tangent_{}.csv", k), csv.str());
  }
  report["tangent"] = {{"lambdas", seq.lambdas},
                       {"masses", seq.masses},
                       {"uniform_bounds", seq.uniform_bounds},
                       {"truncated", seq.truncated},
                       {"notice", seq.notice}};
  io.write("blowup.json", report.dump(2) + "\n");
  out << fmt::format("blowup: {} tangent measures{}\n", seq.measures.size(), seq.truncated ? " (truncated)" : "");
  return kExitOk;
}

int cmd_scan(const RunConfig& c, Outputs& io, std::ostream& out) {
  if (c.scan_epsilons.empty()) throw ConfigError(c.source, 0, "scan.epsilons", "required for scan");
  if (c.scan_radii.empty()) throw ConfigError(c.source, 0, "scan.radii", "required for scan");
  const Source s = acquire(c, io);
  ScanOptions opt;
  opt.radii = c.scan_radii;
  opt.spatial_stride = c.scan_stride;
  opt.times = c.scan_times;
  opt.time_stride = c.scan_time_stride;
  opt.delta = c.scan_delta;
  opt.slab.intervals = c.entropy_intervals;
  const auto sweep = eps_regularity_sweep(*s.density, c.scan_epsilons, opt);
  json all = json::array();
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    const SingularSetEstimate& e = sweep[k];
    std::ostringstream csv;
    write_singular_csv(csv, e);
    io.write(fmt::format("singular_{}.csv", k), csv.str());
    json j = {{"epsilon0", e.epsilon0},       {"flagged", e.flagged.size()}, {"centers_scanned", e.centers_scanned},
              {"empirical_C", e.empirical_C}, {"r_min", e.r_min},            {"r_max", e.r_max}};
    if (!c.box_radii.empty() && !e.flagged.empty()) {
      std::vector<SpacetimePoint> pts;
      for (const auto& f : e.flagged) pts.push_back(f.z);
      j["box_dimension"] = json::parse(box_dimension_json(parabolic_box_dimension(pts, c.box_radii)));
    } else {
      j["box_dimension"] = nullptr;
    }
    all.push_back(j);
    out << fmt::format("scan: epsilon0 {} flagged {} of {}\n", num(e.epsilon0), e.flagged.size(), e.centers_scanned);
  }
  io.write("scan.json", all.dump(2) + "\n");
  return kExitOk;
}

int cmd_stratify(const RunConfig& c, const std::string& input, Outputs& io, std::ostream& out) {
  const std::string path = input.empty() ? c.stratify_input : input;
  if (path.empty()) throw ConfigError(c.source, 0, "stratify.input", "required for stratify (or pass --input)");
  std::ifstream is(path);
  if (!is) throw ValidationError(fmt::format("cannot open '{}'", path));
  const DensitySamples d = read_density_samples_csv(is);
  io.input(path);
  const Stratum st = stratum_dim(d, c.stratify_tol);
  const json j = {{"dimension", st.dimension}, {"v_dimension", st.v_dimension}, {"product", st.product},
                  {"basis", st.basis},         {"u_count", st.u_count},         {"v_count", st.v_count},
                  {"theta_max", st.theta_max}, {"tolerance", c.stratify_tol}};
  io.write("stratum.json", j.dump(2) + "\n");
  out << fmt::format("stratify: dimension {}{}\n", st.dimension, st.product ? " (product with time)" : "");
  return kExitOk;
}

VerifyCheck judged(std::string name, double value, double tol) {
  return {std::move(name), value, tol, value <= tol ? "pass" : "fail"};
}

std::vector<VerifyCheck> verify_suite(const RunConfig& c, const Source& s, const ConnectionField* init) {
  std::vector<VerifyCheck> checks;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  if (init) {
    // dE along V = rhs by a fourth-order centred difference, against -2 <rhs, rhs>.
    const ConnectionField rhs = flow_rhs(*init);
    const double pred = -2.0 * pairing(rhs, rhs);
    double value = 0.0;
    if (pred != 0.0) {
      const double scale = std::sqrt(pairing(*init, *init) / std::max(-pred, 1e-300));
      const double e = 1e-3 * std::min(scale, 1.0);
      auto E = [&](double a) { return energy(shifted(*init, a, rhs)); };
      const double dE = (8 * (E(e) - E(-e)) - (E(2 * e) - E(-2 * e))) / (12 * e);
      value = std::abs(dE - pred) / std::abs(pred);
    }
    checks.push_back(judged("gradient", value, c.gradient_tol));

    const auto& series = s.store->series();
    const double e0 = std::max(series.front().energy, 1e-300);
    double rise = 0.0;
    for (std::size_t k = 1; k < series.size(); ++k) rise = std::max(rise, (series[k].energy - series[k - 1].energy) / e0);
    checks.push_back(judged("energy_decay", rise, c.energy_tol));
  } else {
    checks.push_back({"gradient", 0.0, c.gradient_tol, "skipped"});
    checks.push_back({"energy_decay", 0.0, c.energy_tol, "skipped"});
  }

  const std::vector<double> radii = c.entropy_radii.empty() ? default_radii(c, *s.density) : c.entropy_radii;
  const auto centers = default_centers(c, *s.density);
  AuditOptions aopt;
  aopt.relative_tol = c.entropy_tol;
  aopt.slab.intervals = c.entropy_intervals;
  if (s.connection) {
    std::size_t violations = 0;
    for (const auto& z : centers) {
      const EntropyReport rep = monotonicity_audit(*s.density, z, radii, entropy_cutoff(c, s.density->grid(), z.x), aopt);
      if (rep.supported) violations += rep.violations.size();
    }
    checks.push_back(judged("monotonicity", static_cast<double>(violations), 0.0));
  } else {
    checks.push_back({"monotonicity", 0.0, 0.0, "skipped"});
  }

  double worst = 0.0;
  for (const auto& z : centers) {
    const SandwichResult sw = phi_psi_equivalence_check(*s.density, z, radii, entropy_cutoff(c, s.density->grid(), z.x),
                                                        c.c_max, aopt.slab);
    if (!sw.vacuous) worst = std::max({worst, sw.psi_over_phi, sw.phi_over_psi});
  }
  checks.push_back(judged("sandwich", worst, c.c_max));

  // Dilation law on the atoms of the last eighth of the window.
  MeasureWindow w;
  w.t_end = s.density->t_max();
  w.t_begin = w.t_end - 0.125 * (s.density->t_max() - s.density->t_min());
  w.layers = 8;
  const SpacetimeMeasure mu = measure_from_source(*s.density, w);
  double dil = 0.0;
  for (int i = 0; i < c.verify_samples; ++i) {
    Point x0(c.n), x(c.n);
    for (int a = 0; a < c.n; ++a) {
      x0[a] = unit(rng) * c.L;
      x[a] = (unit(rng) - 0.5) * 0.5 * c.L;
    }
    const double lambda = 0.5 + 1.5 * unit(rng);
    const double span = (w.t_end - w.t_begin) / (lambda * lambda);
    const double t = -0.5 * span * unit(rng);
    const double r = std::sqrt((0.1 + 0.4 * unit(rng)) * (t + span));
    dil = std::max(dil, theta_dilation_check(mu, {x0, w.t_end}, lambda, {x, t}, r));
  }
  checks.push_back(judged("dilation", dil, c.dilation_tol));
  return checks;
}

int cmd_verify(const RunConfig& c, Outputs& io, std::ostream& out, std::ostream& err) {
  const Source s = acquire(c, io);
  std::unique_ptr<ConnectionField> init;
  if (s.store) init = std::make_unique<ConnectionField>(*s.store->snapshot(0));
  const auto checks = verify_suite(c, s, init.get());
  std::ostringstream csv;
  csv << "invariant,value,tolerance,status\n";
  bool ok = true;
  for (const auto& ch : checks) {
    csv << ch.name << ',' << num(ch.value) << ',' << num(ch.tolerance) << ',' << ch.status << '\n';
    out << fmt::format("verify: {:<13} {:<8} value {} tolerance {}\n", ch.name, ch.status, num(ch.value),
                       num(ch.tolerance));
    if (ch.status == "fail") {
      ok = false;
      err << fmt::format("verify: invariant '{}' violated: {} > {}\n", ch.name, num(ch.value), num(ch.tolerance));
    }
  }
  io.write("verify.csv", csv.str());
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

std::string sha256_file(const std::string& path) { return sha256_hex(read_bytes(path)); }

SnapshotStore load_trajectory(const std::string& dir, double L) {
  const fs::path base = fs::path(dir) / "snapshots";
  std::ifstream is(base / "index.csv");
  if (!is) throw ValidationError(fmt::format("no snapshot index in '{}'", dir));
  std::string line;
  std::getline(is, line);
  if (line != "t,file") throw ValidationError("snapshot index: bad header");
  SnapshotStore st;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError(fmt::format("snapshot index: bad row '{}'", line));
    const double t = std::stod(line.substr(0, comma));
    FieldHeader h;
    Field f = read_ymf1((base / line.substr(comma + 1)).string(), L, &h);
    st.add(t, ConnectionField(static_cast<int>(h.m), std::move(f)));
  }
  if (st.size() == 0) throw ValidationError(fmt::format("no snapshots in '{}'", dir));
  return st;
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice Yang-Mills gradient flow: runs, entropy audits, blowups and singular-set scans", "ymflow"};
  app.require_subcommand(1, 1);
  std::string config_path, output_dir, input_path;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"run", "integrate the flow and store the energy series and snapshots"},
      {"entropy", "Phi / Psi reports and monotonicity audits at the configured centres"},
      {"blowup", "curvature and entropy scaling checks and tangent-measure atoms"},
      {"scan", "epsilon-regularity scan and parabolic box dimension"},
      {"stratify", "stratum dimension of a density-sample file"},
      {"verify", "run the invariant suite; exit 0 iff every check passes"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "configuration file")->required();
    sub->add_option("-o,--output", output_dir, "output directory (overrides the config)");
    if (name == "stratify") sub->add_option("-i,--input", input_path, "density samples CSV");
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg = load_config(config_path);
    if (!output_dir.empty()) cfg.output = output_dir;
    set_worker_count(cfg.threads);
    apply_thread_env();
    Outputs io(cfg.output);
    int status = kExitOk;
    if (command == "run") status = cmd_run(cfg, io, out);
    else if (command == "entropy") status = cmd_entropy(cfg, io, out);
    else if (command == "blowup") status = cmd_blowup(cfg, io, out);
    else if (command == "scan") status = cmd_scan(cfg, io, out);
    else if (command == "stratify") status = cmd_stratify(cfg, input_path, io, out);
    else status = cmd_verify(cfg, io, out, err);
    io.manifest(command, config_path, cfg);
    return status;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace ymflow
