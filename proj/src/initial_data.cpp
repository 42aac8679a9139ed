#include "ymflow/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ymflow/bump.hpp"
#include "ymflow/errors.hpp"

namespace ymflow {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_length(const std::vector<double>& v, int n, const char* what) {
  if (static_cast<int>(v.size()) != n) {
    throw ValidationError(std::string(what) + " must have n = " + std::to_string(n) + " entries");
  }
}

}  // namespace

double discrete_wavenumber_sq(const Grid& grid, const std::vector<double>& k) {
  const double h = grid.h();
  double s = 0.0;
  for (double ki : k) {
    const double w = std::sin(ki * h) / h;
    s += w * w;
  }
  return s;
}

ConnectionField abelian_mode(const Grid& grid, int m, const AbelianMode& mode) {
  const int n = grid.n();
  check_length(mode.k, n, "abelian mode wavevector k");
  check_length(mode.v, n, "abelian mode polarization v");
  double kv = 0.0, kk = 0.0, vv = 0.0;
  for (int i = 0; i < n; ++i) {
    kv += mode.k[i] * mode.v[i];
    kk += mode.k[i] * mode.k[i];
    vv += mode.v[i] * mode.v[i];
  }
  if (std::abs(kv) > 1e-12 * std::sqrt(kk * vv)) {
    throw ValidationError("abelian mode requires k.v = 0");
  }
  ConnectionField c(grid, m);
  const int t = packed_index(m, 0, 1);
  // generator(m, 0, 1) has entry (0, 1) = -1.
  const double sign = -1.0;
  for (std::size_t s = 0; s < grid.sites(); ++s) {
    const Point x = grid.position(s);
    double phase = 0.0;
    for (int i = 0; i < n; ++i) phase += mode.k[i] * x[i];
    const double amp = mode.epsilon * std::cos(phase);
    for (int j = 0; j < n; ++j) c.at(s, j)[t] = sign * amp * mode.v[j];
  }
  return c;
}

double abelian_mode_energy(const Grid& grid, int m, const AbelianMode& mode) {
  const AlgElem T = AlgElem::generator(m, 0, 1);
  // |F|^2 sums (s_i v_j - s_j v_i)^2 over i < j with s the lattice symbol
  // sin(k_i h) / h, which is |s|^2 |v|^2 - (s.v)^2.
  double vv = 0.0, sv = 0.0;
  for (std::size_t i = 0; i < mode.v.size(); ++i) {
    vv += mode.v[i] * mode.v[i];
    sv += std::sin(mode.k[i] * grid.h()) / grid.h() * mode.v[i];
  }
  const double k2 = discrete_wavenumber_sq(grid, mode.k);
  const double volume = std::pow(grid.L(), grid.n());
  return 0.5 * mode.epsilon * mode.epsilon * (k2 * vv - sv * sv) * 2.0 * volume / 2.0 * inner(T, T);
}

ConnectionField instanton(const Grid& grid, double rho, const Point& center, double support) {
  if (grid.n() != 4) throw DimensionError("instanton data needs n = 4");
  if (!(rho > 0.0)) throw ValidationError("instanton scale rho must be positive");
  if (!(support > 0.0) || support > 0.5 * grid.L()) {
    throw ValidationError("instanton support radius must lie in (0, L/2]");
  }
  check_length(center, 4, "instanton center");
  // 't Hooft symbols: eta_{a mu nu} = eps_{a mu nu} for mu, nu < 3,
  // eta_{a mu 3} = delta_{a mu}, eta_{a 3 nu} = -delta_{a nu}.
  auto eta = [](int a, int mu, int nu) -> double {
    if (mu < 3 && nu < 3) return 0.5 * (a - mu) * (mu - nu) * (nu - a);
    if (nu == 3 && mu < 3) return a == mu ? 1.0 : 0.0;
    if (mu == 3 && nu < 3) return a == nu ? -1.0 : 0.0;
    return 0.0;
  };
  ConnectionField c(grid, 3);
  std::vector<std::vector<double>> basis;
  for (int a = 0; a < 3; ++a) basis.push_back(so3_basis(a).packed());
  for (std::size_t s = 0; s < grid.sites(); ++s) {
    const Point y = min_image(grid, grid.position(s), center);
    double r2 = 0.0;
    for (double v : y) r2 += v * v;
    const double chi = radial_bump(std::sqrt(r2), 0.5 * support, support);
    if (chi == 0.0) continue;
    const double pref = 2.0 * chi / (r2 + rho * rho);
    for (int mu = 0; mu < 4; ++mu) {
      double* out = c.at(s, mu);
      for (int a = 0; a < 3; ++a) {
        double coef = 0.0;
        for (int nu = 0; nu < 4; ++nu) coef += eta(a, mu, nu) * y[nu];
        coef *= pref;
        for (int q = 0; q < 3; ++q) out[q] += coef * basis[a][q];
      }
    }
  }
  return c;
}

ConnectionField abelian_vortex(const Grid& grid, int m, const Point& center, double radius,
                               double amplitude) {
  check_length(center, grid.n(), "vortex center");
  ConnectionField c(grid, m);
  const int t = packed_index(m, 0, 1);
  for (std::size_t s = 0; s < grid.sites(); ++s) {
    const Point y = min_image(grid, grid.position(s), center);
    double r2 = 0.0;
    for (double v : y) r2 += v * v;
    const double b = smooth_step_down(std::sqrt(r2) / radius);
    if (b == 0.0) continue;
    c.at(s, 0)[t] = -amplitude * b * (-y[1]) / radius;
    c.at(s, 1)[t] = -amplitude * b * y[0] / radius;
  }
  return c;
}

ConnectionField random_connection(const Grid& grid, int m, double amplitude, std::uint64_t seed,
                                  int modes) {
  std::mt19937_64 rng(seed);
  const int n = grid.n();
  ConnectionField c(grid, m);
  const int comps = c.field().components();
  struct Mode {
    std::vector<double> k;
    double phase, coef;
  };
  std::vector<std::vector<Mode>> table(comps);
  for (int q = 0; q < comps; ++q) {
    for (int j = 0; j < modes; ++j) {
      Mode md;
      md.k.resize(n);
      for (int a = 0; a < n; ++a) {
        const int w = static_cast<int>(unit_uniform(rng) * 5.0) - 2;  // -2..2
        md.k[a] = 2.0 * std::numbers::pi * w / grid.L();
      }
      md.phase = 2.0 * std::numbers::pi * unit_uniform(rng);
      md.coef = (2.0 * unit_uniform(rng) - 1.0) * amplitude / modes;
      table[q].push_back(std::move(md));
    }
  }
  for (std::size_t s = 0; s < grid.sites(); ++s) {
    const Point x = grid.position(s);
    double* out = c.field().at(s);
    for (int q = 0; q < comps; ++q) {
      double v = 0.0;
      for (const Mode& md : table[q]) {
        double ph = md.phase;
        for (int a = 0; a < n; ++a) ph += md.k[a] * x[a];
        v += md.coef * std::cos(ph);
      }
      out[q] = v;
    }
  }
  return c;
}

ConnectionField constant_connection(const Grid& grid, const std::vector<AlgElem>& per_direction) {
  if (static_cast<int>(per_direction.size()) != grid.n()) {
    throw DimensionError("constant connection needs one element per direction");
  }
  const int m = per_direction.front().size();
  ConnectionField c(grid, m);
  for (std::size_t s = 0; s < grid.sites(); ++s)
    for (int i = 0; i < grid.n(); ++i) c.set_gamma(s, i, per_direction[i]);
  return c;
}

ConnectionField translate(const ConnectionField& c, int axis, int shift) {
  const Grid& g = c.grid();
  ConnectionField out(g, c.m());
  const int comps = c.field().components();
  for (std::size_t s = 0; s < g.sites(); ++s) {
    const std::size_t src = g.neighbor(s, axis, -shift);
    std::copy(c.field().at(src), c.field().at(src) + comps, out.field().at(s));
  }
  return out;
}

}  // namespace ymflow
