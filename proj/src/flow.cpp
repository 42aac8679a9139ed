#include "ymflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "ymflow/detail/packed.hpp"
#include "ymflow/errors.hpp"
#include "ymflow/parallel.hpp"

namespace ymflow {

namespace {

// out = a + s * b, elementwise over the coefficient arrays.
void axpy_into(Field& out, const Field& a, double s, const Field& b) {
  auto o = out.data();
  const auto x = a.data();
  const auto y = b.data();
  parallel_for(0, o.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) o[i] = x[i] + s * y[i];
  });
}

void add_scaled(Field& acc, double s, const Field& b) {
  auto o = acc.data();
  const auto y = b.data();
  parallel_for(0, o.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) o[i] += s * y[i];
  });
}

void fill_diagnostics(FlowState& s, const CurvatureField& F) {
  const ScalarField rho = curvature_density(F);
  s.energy = 0.5 * integrate(rho);
  double m = 0.0;
  for (double v : rho.data()) m = std::max(m, v);
  s.sup_F = std::sqrt(m);
}

}  // namespace

FlowState make_state(ConnectionField c, double t0) {
  FlowState s;
  s.connection = std::move(c);
  s.t = t0;
  s.curvature = std::make_shared<const CurvatureField>(curvature(s.connection));
  fill_diagnostics(s, *s.curvature);
  return s;
}

FlowState step(const FlowState& s) {
  const double dt = s.dt;
  const ConnectionField& g0 = s.connection;
  FlowState out;
  out.connection = g0;
  Field& acc = out.connection.field();
  ConnectionField stage = g0;

  ConnectionField k = s.curvature ? flow_rhs(g0, *s.curvature) : flow_rhs(g0);
  add_scaled(acc, dt / 6.0, k.field());
  axpy_into(stage.field(), g0.field(), 0.5 * dt, k.field());
  k = flow_rhs(stage);
  add_scaled(acc, dt / 3.0, k.field());
  axpy_into(stage.field(), g0.field(), 0.5 * dt, k.field());
  k = flow_rhs(stage);
  add_scaled(acc, dt / 3.0, k.field());
  axpy_into(stage.field(), g0.field(), dt, k.field());
  k = flow_rhs(stage);
  add_scaled(acc, dt / 6.0, k.field());

  out.t = s.t + dt;
  out.dt = dt;
  out.step_count = s.step_count + 1;

  const auto v = acc.data();
  const int comps = acc.components();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw BlowupDetected(i / comps, out.t);
  }
  out.curvature = std::make_shared<const CurvatureField>(curvature(out.connection));
  fill_diagnostics(out, *out.curvature);
  if (out.energy > s.energy + 1e-10 * s.energy + 1e-300) {
    throw StabilityError(fmt::format("energy increased from {:.17g} to {:.17g} at dt = {:.17g}",
                                     s.energy, out.energy, dt),
                         dt);
  }
  return out;
}

double auto_dt(const FlowState& s, double c_cfl, double next_stamp) {
  const double h = s.connection.grid().h();
  double dt = c_cfl * h * h / (1.0 + h * h * s.sup_F);
  if (next_stamp > s.t && s.t + dt > next_stamp) dt = next_stamp - s.t;
  return dt;
}

// ---- cadence --------------------------------------------------------------

Cadence Cadence::uniform(double interval) {
  if (!(interval > 0.0)) throw ValidationError("uniform cadence interval must be positive");
  Cadence c;
  c.kind = Kind::Uniform;
  c.interval = interval;
  return c;
}

Cadence Cadence::log(double first, int count) {
  if (!(first > 0.0) || count < 2) throw ValidationError("log cadence needs first > 0 and count >= 2");
  Cadence c;
  c.kind = Kind::Log;
  c.interval = first;
  c.count = count;
  return c;
}

Cadence Cadence::every_step() {
  Cadence c;
  c.kind = Kind::EveryStep;
  return c;
}

std::vector<double> Cadence::stamps(double t_end) const {
  std::vector<double> out;
  if (!(t_end > 0.0)) return out;
  switch (kind) {
    case Kind::Uniform: {
      const long n = static_cast<long>(std::floor(t_end / interval * (1.0 + 1e-12)));
      for (long k = 1; k <= n; ++k) out.push_back(std::min(t_end, k * interval));
      break;
    }
    case Kind::Log: {
      if (interval >= t_end) break;
      const double ratio = std::log(t_end / interval);
      for (int k = 0; k < count; ++k) out.push_back(interval * std::exp(ratio * k / (count - 1)));
      out.back() = t_end;
      break;
    }
    case Kind::EveryStep:
      return out;
  }
  // Drop stamps that collide with t_end after rounding.
  while (!out.empty() && t_end - out.back() <= 1e-12 * t_end) out.pop_back();
  out.push_back(t_end);
  return out;
}

// ---- snapshot store -------------------------------------------------------

SnapshotStore::SnapshotStore(const SnapshotStore& other) { *this = other; }

SnapshotStore& SnapshotStore::operator=(const SnapshotStore& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_, other.mutex_);
  times_ = other.times_;
  snaps_ = other.snaps_;
  density_cache_ = other.density_cache_;
  series_ = other.series_;
  blowup = other.blowup;
  cadence = other.cadence;
  return *this;
}

void SnapshotStore::add(double t, ConnectionField c) {
  add_shared(t, std::make_shared<const ConnectionField>(std::move(c)));
}

void SnapshotStore::add_shared(double t, std::shared_ptr<const ConnectionField> c) {
  std::lock_guard lock(mutex_);
  if (!times_.empty()) {
    if (!(t > times_.back())) throw ValidationError("snapshot stamps must be strictly increasing");
    if (c->grid() != snaps_.front()->grid() || c->m() != snaps_.front()->m()) {
      throw DimensionError("snapshot grid or algebra size differs from the store");
    }
  }
  times_.push_back(t);
  snaps_.push_back(std::move(c));
  density_cache_.push_back(nullptr);
}

std::size_t SnapshotStore::size() const {
  std::lock_guard lock(mutex_);
  return times_.size();
}

std::shared_ptr<const ConnectionField> SnapshotStore::snapshot(std::size_t k) const {
  std::lock_guard lock(mutex_);
  return snaps_.at(k);
}

const Grid& SnapshotStore::grid() const {
  if (snaps_.empty()) throw RangeError("empty snapshot store");
  return snaps_.front()->grid();
}

int SnapshotStore::m() const {
  if (snaps_.empty()) throw RangeError("empty snapshot store");
  return snaps_.front()->m();
}

double SnapshotStore::t_min() const {
  if (times_.empty()) throw RangeError("empty snapshot store");
  return times_.front();
}

double SnapshotStore::t_max() const {
  if (times_.empty()) throw RangeError("empty snapshot store");
  return times_.back();
}

ConnectionField SnapshotStore::connection(double t) const {
  std::unique_lock lock(mutex_);
  if (times_.empty() || t < times_.front() || t > times_.back()) {
    throw RangeError(fmt::format("snapshot query at t = {:g} outside the stored window", t));
  }
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times_.begin());
  if (*it == t) return *snaps_[k];
  const auto a = snaps_[k - 1], b = snaps_[k];
  const double w = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
  lock.unlock();
  ConnectionField out(a->grid(), a->m());
  auto o = out.field().data();
  const auto x = a->field().data();
  const auto y = b->field().data();
  parallel_for(0, o.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) o[i] = (1.0 - w) * x[i] + w * y[i];
  });
  return out;
}

ScalarField SnapshotStore::density(double t) const {
  std::shared_ptr<const ConnectionField> snap;
  std::size_t k = 0;
  {
    std::lock_guard lock(mutex_);
    const auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it != times_.end() && *it == t) {
      k = static_cast<std::size_t>(it - times_.begin());
      if (density_cache_[k]) return *density_cache_[k];
      snap = snaps_[k];
    }
  }
  if (!snap) return ConnectionSource::density(t);
  auto rho = std::make_shared<const ScalarField>(curvature_density(curvature(*snap)));
  std::lock_guard lock(mutex_);
  density_cache_[k] = rho;
  return *rho;
}

// ---- run ------------------------------------------------------------------

void write_series_header(std::ostream& os) { os << "t,dt,energy,sup_F\n"; }

void write_series_row(std::ostream& os, const SeriesRow& r) {
  os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", r.t, r.dt, r.energy, r.sup_F);
}

SnapshotStore run(const ConnectionField& initial, double t_end, const Cadence& cadence,
                  const RunOptions& options) {
  if (t_end < 0.0 || !std::isfinite(t_end)) throw ValidationError("t_end must be finite and >= 0");
  SnapshotStore store;
  store.cadence = cadence;
  FlowState state = make_state(initial);
  store.add(0.0, initial);
  auto record = [&](const SeriesRow& row) {
    store.series().push_back(row);
    if (options.series_csv) write_series_row(*options.series_csv, row);
  };
  if (options.series_csv) write_series_header(*options.series_csv);
  record({0.0, 0.0, state.energy, state.sup_F});
  if (options.series_csv) options.series_csv->flush();

  const std::vector<double> stamps = cadence.stamps(t_end);
  const bool every = cadence.kind == Cadence::Kind::EveryStep;
  std::size_t next = 0;
  while (state.t < t_end) {
    const double target = every ? t_end : stamps[next];
    double dt = options.fixed_dt > 0.0 ? options.fixed_dt : auto_dt(state, options.c_cfl, target);
    if (state.t + dt > target) dt = target - state.t;
    state.dt = dt;
    try {
      state = step(state);
    } catch (const BlowupDetected& e) {
      store.blowup = BlowupInfo{e.t(), e.site()};
      break;
    }
    const bool hit = state.t >= target - 1e-12 * std::max(1.0, std::abs(target));
    if (hit) state.t = target;
    record({state.t, state.dt, state.energy, state.sup_F});
    if (every || hit) {
      store.add(state.t, state.connection);
      if (options.series_csv) options.series_csv->flush();
      if (!every) ++next;
    }
  }
  return store;
}

// ---- energy identity ------------------------------------------------------

namespace {

template <int M>
double identity_integrand(const ConnectionField& c, const CurvatureField& F, const ConnectionField& rhs,
                          const Cutoff& cut, CutoffGradient rule) {
  const Grid& g = c.grid();
  const int n = g.n();
  const int m = c.m();
  const int d = c.dim();
  const double inv2h = 1.0 / (2.0 * g.h());
  std::vector<double> vals(g.sites());
  parallel_for(0, g.sites(), [&](std::size_t lo, std::size_t hi) {
    std::vector<double> contracted(d);
    for (std::size_t s = lo; s < hi; ++s) {
      const double phi = cut.phi()[s];
      const double phi2 = phi * phi;
      double v = 0.0;
      for (int j = 0; j < n; ++j) {
        const double* r = rhs.at(s, j);
        v += detail::inner<M>(m, r, r) * phi2;
        std::fill(contracted.begin(), contracted.end(), 0.0);
        for (int i = 0; i < n; ++i) {
          if (i == j) continue;
          const double sign = i < j ? 1.0 : -1.0;
          const std::size_t pair = i < j ? pair_index(n, i, j) : pair_index(n, j, i);
          if (rule == CutoffGradient::Analytic) {
            const double w = 2.0 * phi * cut.grad().at(s)[i];
            if (w == 0.0) continue;
            const double* f = F.at(s, pair);
            for (int q = 0; q < d; ++q) contracted[q] += sign * w * f[q];
          } else {
            // One-sided differences of phi^2 against the neighbouring F, so that
            // summation by parts reproduces the central difference exactly.
            const std::size_t up = g.neighbor(s, i, 1), down = g.neighbor(s, i, -1);
            const double wu = sign * (cut.phi()[up] * cut.phi()[up] - phi2) * inv2h;
            const double wd = sign * (cut.phi()[down] * cut.phi()[down] - phi2) * inv2h;
            if (wu == 0.0 && wd == 0.0) continue;
            const double* fu = F.at(up, pair);
            const double* fd = F.at(down, pair);
            for (int q = 0; q < d; ++q) contracted[q] += wu * fu[q] - wd * fd[q];
          }
        }
        v += detail::inner<M>(m, contracted.data(), r);
      }
      vals[s] = v;
    }
  });
  return integrate_values(g, vals);
}

double weighted_density(const ScalarField& rho, const Cutoff& cut) {
  std::vector<double> v(rho.size());
  for (std::size_t s = 0; s < v.size(); ++s) v[s] = rho[s] * cut.phi()[s] * cut.phi()[s];
  return integrate_values(rho.grid(), v);
}

}  // namespace

EnergyIdentity energy_identity_audit(const SnapshotStore& store, double t1, double t2,
                                     const Cutoff& phi, CutoffGradient rule) {
  if (!(t1 < t2)) throw ValidationError("energy identity needs t1 < t2");
  store.require_window(t1, t2, "energy identity");
  if (phi.grid() != store.grid()) throw DimensionError("cutoff grid differs from the store");
  std::vector<double> ts{t1};
  for (double t : store.times())
    if (t > t1 && t < t2) ts.push_back(t);
  ts.push_back(t2);
  if (ts.size() < 8) {
    throw InsufficientResolutionError(
        fmt::format("energy identity: {} stamps in [{:g}, {:g}], need at least 8", ts.size(), t1, t2));
  }
  EnergyIdentity out;
  out.stamps_used = static_cast<int>(ts.size());
  out.lhs = 0.25 * (weighted_density(store.density(t1), phi) - weighted_density(store.density(t2), phi));
  std::vector<double> f(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const ConnectionField c = store.connection(ts[k]);
    const CurvatureField F = curvature(c);
    const ConnectionField r = flow_rhs(c, F);
    f[k] = detail::dispatch_algebra(c.m(), [&](auto tag) {
      return identity_integrand<decltype(tag)::value>(c, F, r, phi, rule);
    });
  }
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) out.rhs += 0.5 * (ts[k + 1] - ts[k]) * (f[k] + f[k + 1]);
  out.residual = std::abs(out.lhs - out.rhs) /
                 (std::abs(out.lhs) + std::abs(out.rhs) + std::numeric_limits<double>::epsilon());
  return out;
}

}  // namespace ymflow
