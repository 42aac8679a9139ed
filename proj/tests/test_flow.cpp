#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ymflow/errors.hpp"
#include "ymflow/flow.hpp"
#include "ymflow/initial_data.hpp"

using namespace ymflow;
using std::numbers::pi;

namespace {

double max_abs_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Exact solution of the linear lattice ODE for one mode: eps exp(-k2 t) cos(k.x) v.
ConnectionField decayed_mode(const Grid& g, int m, AbelianMode mode, double t) {
  mode.epsilon *= std::exp(-discrete_wavenumber_sq(g, mode.k) * t);
  return abelian_mode(g, m, mode);
}

}  // namespace

TEST_CASE("flat connection is a fixed point") {
  const Grid g(3, 8, 1.0);
  FlowState s = make_state(ConnectionField(g, 3));
  s.dt = 10.0;
  const FlowState t = step(s);
  CHECK(t.connection.field().max_abs() == 0.0);
  CHECK(t.t == 10.0);
  CHECK(t.step_count == 1);
  CHECK(auto_dt(s) == doctest::Approx(0.2 * g.h() * g.h()).epsilon(1e-15));
  CHECK(auto_dt(s, 0.2, 1e-5) == doctest::Approx(1e-5).epsilon(1e-12));
}

TEST_CASE("auto_dt halves when a large sup|F| doubles") {
  const Grid g(2, 8, 1.0);
  const double h2 = g.h() * g.h();
  FlowState s = make_state(ConnectionField(g, 3));
  s.sup_F = 1e8;
  const double a = auto_dt(s);
  s.sup_F = 2e8;
  CHECK(a / auto_dt(s) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(a == doctest::Approx(0.2 * h2 / (1.0 + h2 * 1e8)));
}

TEST_CASE("t_end = 0 stores only the initial snapshot") {
  const Grid g(2, 8, 1.0);
  const ConnectionField c = random_connection(g, 3, 0.3, 1);
  const SnapshotStore st = run(c, 0.0, Cadence::uniform(0.1));
  REQUIRE(st.size() == 1);
  CHECK(st.times()[0] == 0.0);
  CHECK(max_abs_diff(st.snapshot(0)->field(), c.field()) == 0.0);
  CHECK(st.series().size() == 1);
  CHECK_THROWS_AS(run(c, -1.0, Cadence::uniform(0.1)), ValidationError);
}

TEST_CASE("abelian mode decays at the discrete rate") {
  const Grid g(3, 16, 1.0);
  const AbelianMode mode{{2 * pi, 0, 0}, 0.1, {0, 1, 0}};
  const double h = g.h();
  FlowState s = make_state(abelian_mode(g, 3, mode));
  const double T = 0.01;
  const int steps = static_cast<int>(std::ceil(T / (h * h / 8)));
  for (int k = 0; k < steps; ++k) {
    s.dt = T / steps;
    s = step(s);
  }
  const ConnectionField expect = decayed_mode(g, 3, mode, s.t);
  const double amp = expect.field().max_abs();
  CHECK(max_abs_diff(s.connection.field(), expect.field()) <= 1e-6 * amp);
  const double k2 = discrete_wavenumber_sq(g, mode.k);
  CHECK(std::abs(s.energy - abelian_mode_energy(g, 3, mode) * std::exp(-2 * k2 * s.t)) <=
        1e-6 * s.energy);
}

TEST_CASE("energy series of a run follows the closed form") {
  const Grid g(2, 16, 1.0);
  const AbelianMode mode{{2 * pi, -2 * pi}, 0.1, {1, 1}};
  const SnapshotStore st = run(abelian_mode(g, 3, mode), 0.005, Cadence::uniform(0.001));
  const double k2 = discrete_wavenumber_sq(g, mode.k);
  const double E0 = abelian_mode_energy(g, 3, mode);
  for (const SeriesRow& r : st.series())
    CHECK(std::abs(r.energy - E0 * std::exp(-2 * k2 * r.t)) <= 1e-5 * r.energy);
  REQUIRE(st.size() == 6);
  CHECK(st.times().back() == 0.005);
}

TEST_CASE("ten thousand steps at the default CFL stay stable") {
  const Grid g(2, 16, 1.0);
  const AbelianMode mode{{8 * pi, 0}, 0.5, {0, 1}};  // largest lattice symbol
  FlowState s = make_state(abelian_mode(g, 3, mode));
  double last = s.energy;
  for (int k = 0; k < 10000; ++k) {
    s.dt = auto_dt(s);
    s = step(s);
    REQUIRE(s.energy <= last * (1 + 1e-10));
    last = s.energy;
  }
  CHECK(s.step_count == 10000);
  CHECK(std::isfinite(s.energy));
}

TEST_CASE("energy is nonincreasing along random flows") {
  const Grid g(2, 12, 1.0);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const SnapshotStore st = run(random_connection(g, 3, 0.5, seed), 0.004, Cadence::uniform(0.001));
    const auto& ser = st.series();
    const double E0 = ser.front().energy;
    bool ok = true;
    for (std::size_t k = 1; k < ser.size(); ++k) ok = ok && ser[k].energy <= ser[k - 1].energy + 1e-10 * E0;
    CHECK(ok);
    CHECK(ser.back().energy < E0);
  }
}

TEST_CASE("flow commutes with constant gauge transformations") {
  const Grid g(3, 10, 1.0);
  const ConnectionField c = random_connection(g, 3, 1.0, 17);
  GaugeField gf(g, 3);
  const GroupElem G = expm(0.8 * so3_basis(0) - 0.5 * so3_basis(1));
  for (std::size_t s = 0; s < g.sites(); ++s) gf.set(s, G);
  RunOptions opt;
  opt.fixed_dt = 1e-4;
  const SnapshotStore a = run(apply_gauge(c, gf), 0.002, Cadence::uniform(0.0005), opt);
  const SnapshotStore b = run(c, 0.002, Cadence::uniform(0.0005), opt);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a.times()[k] == b.times()[k]);
    CHECK(max_abs_diff(a.snapshot(k)->field(), apply_gauge(*b.snapshot(k), gf).field()) <= 1e-9);
  }
}

TEST_CASE("shifting the initial data by one site shifts every snapshot") {
  const Grid g(3, 10, 1.0);
  const ConnectionField c = random_connection(g, 3, 1.0, 23);
  const SnapshotStore a = run(translate(c, 1, 1), 0.002, Cadence::uniform(0.0005));
  const SnapshotStore b = run(c, 0.002, Cadence::uniform(0.0005));
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a.times()[k] == b.times()[k]);
    CHECK(max_abs_diff(a.snapshot(k)->field(), translate(*b.snapshot(k), 1, 1).field()) == 0.0);
  }
}

TEST_CASE("cadence stamps") {
  auto u = Cadence::uniform(0.25).stamps(1.0);
  REQUIRE(u.size() == 4);
  CHECK(u[0] == 0.25);
  CHECK(u.back() == 1.0);
  // A last interval shorter than the spacing still ends at t_end.
  auto v = Cadence::uniform(0.3).stamps(1.0);
  CHECK(v.back() == 1.0);
  CHECK(v.size() == 4);
  auto l = Cadence::log(1e-3, 4).stamps(1.0);
  REQUIRE(l.size() == 4);
  CHECK(l.front() == doctest::Approx(1e-3));
  CHECK(l[1] == doctest::Approx(1e-2));
  CHECK(l.back() == 1.0);
  CHECK(Cadence::every_step().stamps(1.0).empty());
  CHECK_THROWS_AS(Cadence::uniform(0.0), ValidationError);
  CHECK_THROWS_AS(Cadence::log(1e-3, 1), ValidationError);
}

TEST_CASE("snapshot store interpolation and window") {
  const Grid g(2, 8, 1.0);
  SnapshotStore st;
  ConnectionField a(g, 3), b(g, 3);
  for (std::size_t i = 0; i < b.field().size(); ++i) b.field()[i] = 2.0;
  st.add(1.0, a);
  st.add(3.0, b);
  CHECK_THROWS_AS(st.add(3.0, b), ValidationError);
  CHECK(st.connection(2.5).field()[5] == doctest::Approx(1.5));
  CHECK(st.connection(3.0).field()[0] == 2.0);
  CHECK_THROWS_AS(st.connection(0.5), RangeError);
  CHECK_THROWS_AS(st.density(3.5), RangeError);
  CHECK_THROWS_AS(st.add(4.0, ConnectionField(Grid(2, 10, 1.0), 3)), DimensionError);
  const SnapshotStore copy = st;
  CHECK(copy.size() == 2);
}

TEST_CASE("series CSV output") {
  const Grid g(2, 8, 1.0);
  std::ostringstream os;
  RunOptions opt;
  opt.series_csv = &os;
  const SnapshotStore st = run(random_connection(g, 3, 0.3, 2), 0.002, Cadence::uniform(0.001), opt);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,dt,energy,sup_F");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == st.series().size());
  std::ostringstream one;
  write_series_row(one, {0.1, 0.25, 1.0 / 3.0, 2.0});
  CHECK(one.str() == "0.10000000000000001,0.25,0.33333333333333331,2\n");
}

TEST_CASE("overflow is reported as a blowup with the store kept") {
  const Grid g(2, 8, 1.0);
  const ConnectionField c = random_connection(g, 3, 1e60, 3);
  RunOptions opt;
  opt.fixed_dt = 1.0;
  const SnapshotStore st = run(c, 5.0, Cadence::uniform(1.0), opt);
  REQUIRE(st.blowup.has_value());
  CHECK(st.blowup->t == 1.0);
  CHECK(st.blowup->site < g.sites());
  CHECK(st.size() == 1);
}

TEST_CASE("oversized step raises a stability error carrying dt") {
  const Grid g(2, 8, 1.0);
  const AbelianMode mode{{4 * pi, 0}, 0.1, {0, 1}};
  FlowState s = make_state(abelian_mode(g, 3, mode));
  s.dt = 0.1;
  try {
    step(s);
    FAIL("expected a stability error");
  } catch (const StabilityError& e) {
    CHECK(e.dt() == 0.1);
  }
}

TEST_CASE("energy identity: flat flow, whole torus, and errors") {
  const Grid g(2, 8, 1.0);
  const SnapshotStore flat = run(ConnectionField(g, 3), 0.01, Cadence::uniform(0.001));
  const EnergyIdentity z = energy_identity_audit(flat, 0.0, 0.01, Cutoff::one(g));
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  CHECK(z.residual == 0.0);

  const Grid g3(3, 16, 1.0);
  const AbelianMode mode{{2 * pi, 0, 0}, 0.1, {0, 1, 0}};
  const SnapshotStore st = run(abelian_mode(g3, 3, mode), 0.01, Cadence::uniform(0.01 / 64));
  const EnergyIdentity one = energy_identity_audit(st, 0.0, 0.01, Cutoff::one(g3));
  CHECK(one.residual <= 1e-4);
  // Whole-torus identity is half the global dissipation.
  const double k2 = discrete_wavenumber_sq(g3, mode.k);
  const double E0 = abelian_mode_energy(g3, 3, mode);
  CHECK(one.lhs == doctest::Approx(0.5 * E0 * (1 - std::exp(-2 * k2 * 0.01))).epsilon(1e-6));
  CHECK(one.stamps_used == 65);

  CHECK_THROWS_AS(energy_identity_audit(st, 0.0, 0.0001, Cutoff::one(g3)), InsufficientResolutionError);
  CHECK_THROWS_AS(energy_identity_audit(st, 0.0, 0.02, Cutoff::one(g3)), RangeError);
  CHECK_THROWS_AS(energy_identity_audit(st, 0.005, 0.001, Cutoff::one(g3)), ValidationError);
}

TEST_CASE("energy identity with a bump: lattice rule vs analytic gradient") {
  const Grid g(3, 16, 1.0);
  const AbelianMode mode{{2 * pi, 2 * pi, 0}, 0.1, {1, -1, 0}};
  const SnapshotStore st = run(abelian_mode(g, 3, mode), 0.01, Cadence::uniform(0.01 / 32));
  const Cutoff bump = Cutoff::bump(g, Point{0.3, 0.3, 0.5}, 0.25);
  const EnergyIdentity lat = energy_identity_audit(st, 0.0, 0.01, bump);
  const EnergyIdentity ana = energy_identity_audit(st, 0.0, 0.01, bump, CutoffGradient::Analytic);
  const EnergyIdentity one = energy_identity_audit(st, 0.0, 0.01, Cutoff::one(g));
  CHECK(lat.lhs == ana.lhs);
  // The lattice rule leaves only the time quadrature error, which does not
  // depend on where the cutoff sits.
  CHECK(lat.residual == doctest::Approx(one.residual).epsilon(0.05));
  CHECK(ana.residual > lat.residual);
  CHECK(ana.residual < 0.05);
}
