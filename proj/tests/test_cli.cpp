#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "ymflow/cli.hpp"
#include "ymflow/config.hpp"
#include "ymflow/singular.hpp"

using namespace ymflow;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ymflow_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.conf";
  std::ofstream(p) << text;
  return p.string();
}

struct Result {
  int status;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ymflow");
  std::ostringstream out, err;
  const int status = execute(args, out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const char* kFlat = R"(version = 1
grid.n = 4
grid.N = 8
data = flat
flow.t_end = 0.002
flow.cadence = uniform 0.0005
)";

const char* kAbelian = R"(version = 1
grid.n = 4
grid.N = 12
data = abelian-mode
data.k = 6.283185307179586 0 0 0
data.v = 0 1 0 0
data.epsilon = 0.1
flow.t_end = 0.004
flow.cadence = uniform 0.0005
seed = 3
entropy.centers = 0.25 0.5 0.5 0.5 0.004
entropy.radii = 0.00390625 0.0078125 0.015625
)";

// Every emitted file must be listed with the digest of its bytes.
void check_manifest(const fs::path& dir) {
  const json m = json::parse(slurp(dir / "manifest.json"));
  std::set<std::string> listed;
  for (const auto& f : m["files"]) {
    const std::string path = f["path"];
    listed.insert(path);
    CHECK(f["sha256"] == sha256_file((dir / path).string()));
    CHECK(f["bytes"] == fs::file_size(dir / path));
  }
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string rel = fs::relative(e.path(), dir).generic_string();
    if (rel != "manifest.json") CHECK_MESSAGE(listed.count(rel) == 1, rel);
  }
  CHECK(m.contains("tolerances"));
  CHECK(m["config"]["sha256"].get<std::string>().size() == 64);
}

}  // namespace

TEST_CASE("sha256 of known vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config parsing") {
  std::istringstream good(std::string(kAbelian) + "flow.cadence2 = x\n");
  try {
    parse_config(good, "a.conf");
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 13);
    CHECK(e.field() == "flow.cadence2");
    CHECK(std::string(e.what()) == "a.conf:13: field 'flow.cadence2': unknown key");
  }

  std::istringstream ok(kAbelian);
  const RunConfig c = parse_config(ok);
  CHECK(c.n == 4);
  CHECK(c.N == 12);
  CHECK(c.data == DataKind::AbelianMode);
  CHECK(c.cadence.kind == Cadence::Kind::Uniform);
  CHECK(c.cadence.interval == 0.0005);
  REQUIRE(c.entropy_centers.size() == 1);
  CHECK(c.entropy_centers[0].t == 0.004);
  CHECK(c.entropy_centers[0].x == Point{0.25, 0.5, 0.5, 0.5});
  CHECK(c.seed == 3);

  auto error_of = [](const std::string& text) -> std::pair<int, std::string> {
    std::istringstream is(text);
    try {
      parse_config(is);
    } catch (const ConfigError& e) {
      return {e.line(), e.field()};
    }
    return {-1, ""};
  };
  CHECK(error_of("grid.n = 3\n") == std::make_pair(0, std::string("version")));
  CHECK(error_of("version = 2\n") == std::make_pair(1, std::string("version")));
  CHECK(error_of("version = 1\ngrid.N = 4\n") == std::make_pair(2, std::string("grid.N")));
  CHECK(error_of("version = 1\ngrid.L = abc\n") == std::make_pair(2, std::string("grid.L")));
  CHECK(error_of("version = 1\ngrid.L = 1 2\n") == std::make_pair(2, std::string("grid.L")));
  CHECK(error_of("version = 1\n# note\ngrid.n = 4\ngrid.n = 5\n") == std::make_pair(4, std::string("grid.n")));
  CHECK(error_of("version = 1\nflow.cadence = sometimes\n") == std::make_pair(2, std::string("flow.cadence")));
  CHECK(error_of("version = 1\njust text\n") == std::make_pair(2, std::string("just text")));
  CHECK(error_of("version = 1\ngrid.n = 2\ndata = abelian-mode\ndata.k = 1 1\ndata.v = 1 0\n") ==
        std::make_pair(5, std::string("data.v")));
  CHECK(error_of("version = 1\ndata = instanton\ndata.rho = 0.1\n") == std::make_pair(0, std::string("data.support")));
  CHECK(error_of("version = 1\nentropy.centers = 0.5 0.5 0.5 0.5\n") ==
        std::make_pair(2, std::string("entropy.centers")));
  CHECK(error_of(std::string(kFlat) + "flow.cadence = log 1e-4 8\n").first == 7);

  std::istringstream logc("version = 1\nflow.cadence = log 1e-4 8\n");
  CHECK(parse_config(logc).cadence.kind == Cadence::Kind::Log);
}

TEST_CASE("invalid config exits nonzero with line and field") {
  const fs::path dir = scratch("invalid");
  const std::string cfg = write_config(dir, "version = 1\ngrid.n = 4\ngrid.NN = 3\n");
  const Result r = cli({"run", "-c", cfg, "-o", (dir / "out").string()});
  CHECK(r.status == kExitConfig);
  CHECK(r.err.find(cfg + ":3: field 'grid.NN'") != std::string::npos);
  CHECK(cli({"frobnicate"}).status == kExitConfig);
  CHECK(cli({"run"}).status == kExitConfig);
  CHECK(cli({"--help"}).status == kExitOk);
}

TEST_CASE("verify on the flat connection") {
  const fs::path dir = scratch("flat");
  const std::string cfg = write_config(dir, kFlat);
  const Result r = cli({"verify", "-c", cfg, "-o", (dir / "out").string()});
  CHECK(r.status == kExitOk);
  std::istringstream csv(slurp(dir / "out" / "verify.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "invariant,value,tolerance,status");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::istringstream row(line);
    std::string name, value, tol, status;
    std::getline(row, name, ',');
    std::getline(row, value, ',');
    std::getline(row, tol, ',');
    std::getline(row, status, ',');
    CHECK_MESSAGE(value == "0", name);
    CHECK_MESSAGE(status == "pass", name);
  }
  CHECK(rows == 5);
  check_manifest(dir / "out");
}

TEST_CASE("verify is deterministic and independent of the worker count") {
  const fs::path dir = scratch("determinism");
  const std::string cfg = write_config(dir, kAbelian);
  REQUIRE(cli({"verify", "-c", cfg, "-o", (dir / "a").string()}).status == kExitOk);
  REQUIRE(cli({"verify", "-c", cfg, "-o", (dir / "b").string()}).status == kExitOk);
  for (const auto& e : fs::directory_iterator(dir / "a"))
    CHECK_MESSAGE(slurp(e.path()) == slurp(dir / "b" / e.path().filename()), e.path().filename().string());

  ::setenv("YMFLOW_THREADS", "2", 1);
  const Result two = cli({"verify", "-c", cfg, "-o", (dir / "c").string()});
  ::unsetenv("YMFLOW_THREADS");
  CHECK(two.status == kExitOk);
  CHECK(json::parse(slurp(dir / "c" / "manifest.json"))["workers"] == 2);
  CHECK(slurp(dir / "c" / "verify.csv") == slurp(dir / "a" / "verify.csv"));
  CHECK(slurp(dir / "c" / "series.csv") == slurp(dir / "a" / "series.csv"));
  check_manifest(dir / "a");
}

TEST_CASE("a failing check names the invariant") {
  const fs::path dir = scratch("failing");
  const std::string cfg = write_config(dir, std::string(kAbelian) + "verify.gradient_tolerance = 1e-300\n");
  const Result r = cli({"verify", "-c", cfg, "-o", (dir / "out").string()});
  CHECK(r.status == kExitVerifyFailed);
  CHECK(r.err.find("invariant 'gradient' violated") != std::string::npos);
}

TEST_CASE("run then entropy from the stored trajectory") {
  const fs::path dir = scratch("run_entropy");
  const std::string run_dir = (dir / "run").string();
  REQUIRE(cli({"run", "-c", write_config(dir, kAbelian), "-o", run_dir}).status == kExitOk);
  check_manifest(run_dir);
  const SnapshotStore st = load_trajectory(run_dir, 1.0);
  CHECK(st.size() == 9);
  CHECK(st.times().back() == 0.004);

  const std::string cfg = write_config(dir, std::string(kAbelian) + "trajectory = " + run_dir + "\n");
  const Result r = cli({"entropy", "-c", cfg, "-o", (dir / "entropy").string()});
  REQUIRE(r.status == kExitOk);
  const json rep = json::parse(slurp(dir / "entropy" / "entropy.json"));
  REQUIRE(rep.size() == 1);
  CHECK(rep[0]["supported"] == true);
  CHECK(rep[0]["violations"].empty());
  const auto phi = rep[0]["phi"].get<std::vector<double>>();
  REQUIRE(phi.size() == 3);
  CHECK(phi[0] > 0.0);
  for (std::size_t k = 1; k < phi.size(); ++k) CHECK(phi[k - 1] <= phi[k] * (1 + 1e-6));
  const json m = json::parse(slurp(dir / "entropy" / "manifest.json"));
  CHECK(m["inputs"].size() == 1);
  check_manifest(dir / "entropy");
}

TEST_CASE("scan of the synthetic profile flags only the concentration point") {
  const fs::path dir = scratch("scan");
  const std::string cfg = write_config(dir, R"(version = 1
grid.n = 2
grid.N = 64
data = synthetic-density
data.center = 0.5 0.5
data.blowup_time = 0.01
data.amplitude = 60
scan.epsilons = 0.05 0.3 0.8
scan.radii = 0.015625 0.03125
scan.stride = 4
scan.times = 0.008 0.0095 0.01
scan.box_radii = 0.25 0.125
)");
  REQUIRE(cli({"scan", "-c", cfg, "-o", (dir / "out").string()}).status == kExitOk);
  const double reach = 4.0 / 64 + 0.015625;
  for (int k = 0; k < 3; ++k) {
    std::istringstream csv(slurp(dir / "out" / ("singular_" + std::to_string(k) + ".csv")));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "x1,x2,t,min_psi");
    int rows = 0;
    while (std::getline(csv, line)) {
      ++rows;
      double x, y, t, psi;
      char c;
      std::istringstream row(line);
      row >> x >> c >> y >> c >> t >> c >> psi;
      CHECK(parabolic_dist({{x, y}, t}, {{0.5, 0.5}, 0.01}, 1.0) <= reach);
    }
    CHECK(rows >= 1);
  }
  check_manifest(dir / "out");
}

TEST_CASE("stratify and blowup commands") {
  const fs::path dir = scratch("stratify");
  {
    std::ofstream os(dir / "samples.csv");
    os << "x1,x2,t,theta\n0,0,0,1\n0.5,0,0,0.2\n0,0.5,0,0.3\n0,0,0.25,0.4\n0.5,0.5,-0.25,0.1\n";
  }
  const std::string cfg = write_config(dir, "version = 1\ngrid.n = 2\nstratify.tolerance = 1e-6\n");
  REQUIRE(cli({"stratify", "-c", cfg, "-i", (dir / "samples.csv").string(), "-o", (dir / "out").string()}).status ==
          kExitOk);
  const json s = json::parse(slurp(dir / "out" / "stratum.json"));
  CHECK(s["dimension"] == 0);
  check_manifest(dir / "out");

  const std::string bcfg = write_config(dir, std::string(kAbelian) + R"(blowup.center = 0.25 0.5 0.5 0.5 0.004
blowup.lambdas = 1 0.5
blowup.radius = 0.015625
blowup.tangent_radius = 0.125
blowup.tangent_depth = 0.002
blowup.tangent_layers = 4
)");
  REQUIRE(cli({"blowup", "-c", bcfg, "-o", (dir / "blowup").string()}).status == kExitOk);
  const json b = json::parse(slurp(dir / "blowup" / "blowup.json"));
  CHECK(b["entropy_scaling"]["phi_relative"].get<double>() <= 1e-6);
  CHECK(b["tangent"]["masses"].size() == 2);
  check_manifest(dir / "blowup");
}
