#include "ymflow/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <fmt/format.h>
#include "json.hpp"

#include "ymflow/errors.hpp"
#include "ymflow/gauge.hpp"
#include "ymflow/parallel.hpp"

namespace ymflow {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Per-axis displacement of the grid coordinates from a centre, nearest image.
struct AxisOffsets {
  std::vector<std::vector<double>> d;

  AxisOffsets(const Grid& g, const Point& x0) : d(g.n(), std::vector<double>(g.N())) {
    if (static_cast<int>(x0.size()) != g.n()) throw DimensionError("centre has the wrong dimension");
    for (int a = 0; a < g.n(); ++a)
      for (int i = 0; i < g.N(); ++i) d[a][i] = wrap_displacement(i * g.h() - x0[a], g.L());
  }

  // Fills y with the displacement of `site` and returns |y|^2.
  double at(const Grid& g, std::size_t site, double* y) const {
    double r2 = 0.0;
    std::size_t rest = site;
    for (int a = 0; a < g.n(); ++a) {
      const std::size_t st = g.stride(a);
      const auto i = static_cast<int>(rest / st);
      rest %= st;
      y[a] = d[a][i];
      r2 += y[a] * y[a];
    }
    return r2;
  }
};

// Composite Simpson rule with `intervals` (even) subintervals.
template <class F>
double simpson(F&& f, double a, double b, int intervals) {
  const double step = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int k = 1; k < intervals; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * step);
  return s * step / 3.0;
}

void check_intervals(const SlabOptions& opt, double a, double b, const char* what) {
  if (opt.intervals < 8 || opt.intervals % 2 != 0) {
    throw InsufficientResolutionError(fmt::format("{}: need an even slice count >= 8, got {}", what, opt.intervals));
  }
  const double step = (b - a) / opt.intervals;
  if (!(step > 0.0) || a + step == a || b - step == b) {
    throw InsufficientResolutionError(
        fmt::format("{}: slab [{:g}, {:g}] too thin to hold {} distinct slices", what, a, b, opt.intervals));
  }
}

double cutoff_sq(const Cutoff& phi, std::size_t s) {
  const double p = phi.phi()[s];
  return p * p;
}

// True if every site carrying curvature above 1e-14 max has phi == 1.
bool support_inside_unit_region(const ScalarField& rho, const Cutoff& phi) {
  if (phi.is_one()) return true;
  const double cut = 1e-14 * rho.max_abs();
  for (std::size_t s = 0; s < rho.size(); ++s)
    if (rho[s] > cut && phi.phi()[s] < 1.0) return false;
  return true;
}

double phi_slice(const DensitySource& src, const SpacetimePoint& z0, double R, const Cutoff& phi,
                 bool* supported, double* tol) {
  check_entropy_radius(src.grid(), R, phi);
  const double t = z0.t - R * R;
  src.require_window(t, t, "Phi slice");
  const ScalarField rho = src.density(t);
  const SliceIntegral I = weighted_slice(rho, z0, t, phi);
  const double scale = 0.5 * std::pow(R, 4);
  if (supported) *supported = support_inside_unit_region(rho, phi);
  if (tol) *tol = quadrature_tolerance(src.grid(), scale * I.sup);
  return scale * I.value;
}

double psi_slab(const DensitySource& src, const SpacetimePoint& z0, double R, const Cutoff& phi,
                const SlabOptions& opt, bool* supported) {
  check_entropy_radius(src.grid(), R, phi);
  src.require_window(z0.t - 4.0 * R * R, z0.t - R * R, "Psi slab");
  bool inside = true;
  double total = 0.0;
  for (const auto& [t, w] : psi_slab_nodes(z0.t, R, opt)) {
    const ScalarField rho = src.density(t);
    if (supported && inside) inside = support_inside_unit_region(rho, phi);
    total += w * weighted_slice(rho, z0, t, phi).value;
  }
  if (supported) *supported = inside;
  return total;
}

ThetaSequence finish_theta(std::vector<double> radii, std::vector<double> values) {
  ThetaSequence out;
  out.radii = std::move(radii);
  out.values = std::move(values);
  out.estimate = out.values.empty() ? 0.0 : out.values.back();
  out.trend = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < out.values.size(); ++k)
    out.trend = std::max(out.trend, out.values[k + 1] - out.values[k]);
  if (out.values.size() < 2) out.trend = 0.0;
  return out;
}

void check_descending(const std::vector<double>& radii) {
  if (radii.empty()) throw ValidationError("density needs at least one radius");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0)) throw ValidationError("radii must be positive");
    if (k > 0 && !(radii[k] < radii[k - 1])) throw ValidationError("density radii must be strictly descending");
  }
}

// Smallest C >= 0 with lo <= e^{C d} hi + C d E0.
double fit_envelope(double lo, double hi, double d, double E0) {
  if (lo <= hi) return 0.0;
  auto ok = [&](double C) { return std::exp(C * d) * hi + C * d * E0 >= lo; };
  double top = 1.0;
  while (!ok(top)) {
    top *= 2.0;
    if (top > 1e300) return std::numeric_limits<double>::infinity();
  }
  double bot = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (bot + top);
    (ok(mid) ? top : bot) = mid;
  }
  return top;
}

}  // namespace

double heat_kernel(const SpacetimePoint& z0, const SpacetimePoint& z, double period) {
  const double tau = std::abs(z.t - z0.t);
  if (tau == 0.0) throw SingularTimeError("heat kernel evaluated at t = t0");
  const Point d = displacement(z.x, z0.x, period);
  double r2 = 0.0;
  for (double v : d) r2 += v * v;
  const double n = static_cast<double>(d.size());
  return std::exp(-r2 / (4.0 * tau)) / std::pow(kFourPi * tau, 0.5 * n);
}

double heat_kernel(const Grid& grid, const SpacetimePoint& z0, const SpacetimePoint& z) {
  if (static_cast<int>(z0.x.size()) != grid.n() || static_cast<int>(z.x.size()) != grid.n()) {
    throw DimensionError("heat kernel points must match the grid dimension");
  }
  return heat_kernel(z0, z, grid.L());
}

double quadrature_tolerance(const Grid& grid, double integrand_sup) {
  return std::max(1e-8, 5.0 * grid.h() * grid.h() * integrand_sup * std::pow(grid.L(), grid.n()));
}

SliceIntegral weighted_slice(const ScalarField& rho, const SpacetimePoint& z0, double t, const Cutoff& phi) {
  const Grid& g = rho.grid();
  if (phi.grid() != g) throw DimensionError("cutoff grid differs from the density grid");
  const double tau = std::abs(t - z0.t);
  if (tau == 0.0) throw SingularTimeError("entropy slice at t = t0");
  const AxisOffsets off(g, z0.x);
  const double norm = std::pow(kFourPi * tau, -0.5 * g.n());
  const double inv4tau = 1.0 / (4.0 * tau);
  std::vector<double> vals(g.sites());
  parallel_for(0, g.sites(), [&](std::size_t lo, std::size_t hi) {
    double y[16];
    for (std::size_t s = lo; s < hi; ++s) {
      const double w = cutoff_sq(phi, s);
      if (w == 0.0 || rho[s] == 0.0) {
        vals[s] = 0.0;
        continue;
      }
      vals[s] = rho[s] * w * norm * std::exp(-off.at(g, s, y) * inv4tau);
    }
  });
  SliceIntegral out;
  for (double v : vals) out.sup = std::max(out.sup, std::abs(v));
  out.value = integrate_values(g, vals);
  return out;
}

void check_entropy_radius(const Grid& grid, double R, const Cutoff& phi) {
  if (!(R > 0.0) || !std::isfinite(R)) throw ValidationError("entropy radius must be positive");
  const double iota = std::min(phi.iota(), grid.L() / 4.0);
  if (4.0 * R > iota * (1.0 + 1e-12)) {
    throw ValidationError(fmt::format("entropy radius {:g} violates 4R <= iota = {:g}", R, iota));
  }
  if (2.0 * R > grid.L() / 16.0 * (1.0 + 1e-12)) {
    throw ValidationError(fmt::format("entropy radius {:g} violates 2R <= L/16", R));
  }
}

std::vector<std::pair<double, double>> psi_slab_nodes(double t0, double R, const SlabOptions& opt) {
  if (!(R > 0.0) || !std::isfinite(R)) throw ValidationError("entropy radius must be positive");
  const double a = t0 - 4.0 * R * R, b = t0 - R * R;
  check_intervals(opt, a, b, "Psi slab");
  const double step = (b - a) / opt.intervals;
  const double scale = 0.5 * R * R * step / 3.0;
  std::vector<std::pair<double, double>> nodes;
  for (int k = 0; k <= opt.intervals; ++k) {
    const double c = (k == 0 || k == opt.intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    nodes.emplace_back(k == opt.intervals ? b : a + k * step, c * scale);
  }
  return nodes;
}

double phi_entropy(const DensitySource& src, const SpacetimePoint& z0, double R, const Cutoff& phi) {
  return phi_slice(src, z0, R, phi, nullptr, nullptr);
}

double psi_entropy(const DensitySource& src, const SpacetimePoint& z0, double R, const Cutoff& phi,
                   const SlabOptions& opt) {
  return psi_slab(src, z0, R, phi, opt, nullptr);
}

ThetaSequence theta_density(const DensitySource& src, const SpacetimePoint& z, const std::vector<double>& radii,
                            const Cutoff& phi, const SlabOptions& opt) {
  check_descending(radii);
  std::vector<double> values;
  for (double R : radii) values.push_back(psi_entropy(src, z, R, phi, opt));
  return finish_theta(radii, std::move(values));
}

ThetaSequence theta_density(const SpacetimeMeasure& mu, const SpacetimePoint& z, const std::vector<double>& radii) {
  check_descending(radii);
  if (static_cast<int>(z.x.size()) != mu.n) throw DimensionError("centre dimension differs from the measure");
  std::vector<double> values;
  for (double R : radii) {
    const double a = z.t - 4.0 * R * R, b = z.t - R * R;
    std::vector<double> terms;
    for (const Atom& at : mu.atoms)
      if (at.t >= a && at.t <= b) terms.push_back(heat_kernel(z, {at.x, at.t}, mu.period) * at.w);
    values.push_back(R * R * pairwise_sum(terms));
  }
  return finish_theta(radii, std::move(values));
}

double theta_slice(const SpacetimeMeasure& mu, const SpacetimePoint& z, double r) {
  if (!(mu.layer_dt > 0.0)) throw ValidationError("slice density needs a measure with layer_dt > 0");
  if (!(r > 0.0)) throw ValidationError("slice radius must be positive");
  if (static_cast<int>(z.x.size()) != mu.n) throw DimensionError("centre dimension differs from the measure");
  const double s = z.t - r * r;
  const double half = 0.5 * mu.layer_dt;
  std::vector<double> terms;
  for (const Atom& at : mu.atoms) {
    const double d = at.t - s;
    if (d >= -half && d < half) terms.push_back(heat_kernel(z, {at.x, s}, mu.period) * at.w);
  }
  return std::pow(r, 4) * pairwise_sum(terms) / mu.layer_dt;
}

double soliton_slice(const ConnectionField& c, const SpacetimePoint& z0, double t, const Cutoff& phi,
                     StaticMode mode) {
  const Grid& g = c.grid();
  if (phi.grid() != g) throw DimensionError("cutoff grid differs from the connection grid");
  const double dt = t - z0.t;
  if (dt == 0.0) throw SingularTimeError("soliton slice at t = t0");
  const double tau = std::abs(dt);
  const int n = g.n(), d = c.dim();
  const CurvatureField F = curvature(c);
  ConnectionField rhs;
  if (mode == StaticMode::FromConnection) rhs = flow_rhs(c, F);
  const AxisOffsets off(g, z0.x);
  const double norm = std::pow(kFourPi * tau, -0.5 * n);
  std::vector<double> vals(g.sites());
  parallel_for(0, g.sites(), [&](std::size_t lo, std::size_t hi) {
    double y[16];
    std::vector<double> w(d);
    for (std::size_t s = lo; s < hi; ++s) {
      const double p2 = cutoff_sq(phi, s);
      if (p2 == 0.0) {
        vals[s] = 0.0;
        continue;
      }
      const double r2 = off.at(g, s, y);
      double sq = 0.0;
      for (int j = 0; j < n; ++j) {
        // D*F = -flow_rhs, so y/(2 dt) contracted with F minus D*F adds rhs.
        if (mode == StaticMode::FromConnection) {
          const double* r = rhs.at(s, j);
          std::copy(r, r + d, w.begin());
        } else {
          std::fill(w.begin(), w.end(), 0.0);
        }
        for (int i = 0; i < n; ++i) {
          if (i == j) continue;
          const double coef = (i < j ? 1.0 : -1.0) * y[i] / (2.0 * dt);
          const double* f = F.at(s, i < j ? pair_index(n, i, j) : pair_index(n, j, i));
          for (int q = 0; q < d; ++q) w[q] += coef * f[q];
        }
        for (int q = 0; q < d; ++q) sq += 2.0 * w[q] * w[q];
      }
      vals[s] = tau * sq * p2 * norm * std::exp(-r2 / (4.0 * tau));
    }
  });
  return integrate_values(g, vals);
}

double soliton_residual(const ConnectionSource& src, const SpacetimePoint& z0, double R1, double R2,
                        const Cutoff& phi, StaticMode mode, const SlabOptions& opt) {
  if (!(R1 > 0.0) || !(R1 < R2)) throw ValidationError("soliton residual needs 0 < R1 < R2");
  check_entropy_radius(src.grid(), R2, phi);
  src.require_window(z0.t - 4.0 * R2 * R2, z0.t - R1 * R1, "soliton residual");
  // Swap the order: for s = t0 - t, r runs over [max(R1, sqrt(s)/2), min(R2, sqrt(s))],
  // so the r-weight int r dr is (min(R2^2, s) - max(R1^2, s/4)) / 2.
  auto weight = [&](double s) { return std::max(0.0, 0.5 * (std::min(R2 * R2, s) - std::max(R1 * R1, 0.25 * s))); };
  std::vector<double> cuts{R1 * R1, 4.0 * R1 * R1, R2 * R2, 4.0 * R2 * R2};
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (!(b > a)) continue;
    check_intervals(opt, a, b, "soliton residual");
    total += simpson(
        [&](double s) {
          const double w = weight(s);
          if (w == 0.0) return 0.0;
          const double t = z0.t - s;
          return w * soliton_slice(src.connection(t), z0, t, phi, mode);
        },
        a, b, opt.intervals);
  }
  return total;
}

EntropyReport monotonicity_audit(const DensitySource& src, const SpacetimePoint& z0, const std::vector<double>& radii,
                                 const Cutoff& phi, const AuditOptions& opt) {
  for (std::size_t k = 0; k < radii.size(); ++k)
    if (k > 0 && !(radii[k] > radii[k - 1])) throw ValidationError("audit radii must be strictly ascending");
  EntropyReport rep;
  rep.center = z0;
  rep.radii = radii;
  rep.phi_values.resize(radii.size());
  rep.psi_values.resize(radii.size());
  rep.tol_quad.resize(radii.size());
  std::vector<char> inside(2 * radii.size(), 1);
  parallel_for(0, radii.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      bool a = true, b = true;
      rep.phi_values[k] = phi_slice(src, z0, radii[k], phi, &a, &rep.tol_quad[k]);
      rep.psi_values[k] = psi_slab(src, z0, radii[k], phi, opt.slab, &b);
      inside[2 * k] = a;
      inside[2 * k + 1] = b;
    }
  });
  rep.supported = std::all_of(inside.begin(), inside.end(), [](char c) { return c != 0; });
  if (!radii.empty()) rep.theta_estimate = rep.psi_values.front();
  if (opt.soliton) {
    const auto* cs = dynamic_cast<const ConnectionSource*>(&src);
    if (!cs) throw ValidationError("soliton residuals need a source with a connection");
    for (std::size_t k = 0; k + 1 < radii.size(); ++k)
      rep.soliton_residuals.push_back(soliton_residual(*cs, z0, radii[k], radii[k + 1], phi,
                                                       StaticMode::FromConnection, opt.slab));
  }
  double top = 0.0;
  for (double v : rep.phi_values) top = std::max(top, v);
  rep.tol = opt.relative_tol * top;
  double top_psi = 0.0;
  for (double v : rep.psi_values) top_psi = std::max(top_psi, v);
  const double tol_psi = opt.relative_tol * top_psi;
  for (std::size_t j = 0; j < radii.size(); ++j)
    for (std::size_t k = j + 1; k < radii.size(); ++k) {
      if (rep.phi_values[j] > rep.phi_values[k] + rep.tol)
        rep.violations.push_back({j, k, rep.phi_values[j] - rep.phi_values[k]});
      if (rep.psi_values[j] > rep.psi_values[k] + tol_psi)
        rep.psi_violations.push_back({j, k, rep.psi_values[j] - rep.psi_values[k]});
    }
  if (!rep.supported) {
    // Outside the phi = 1 case only the envelope constant is reported.
    const double E0 = 0.5 * integrate(src.density(src.t_min()));
    double C = 0.0;
    for (const Violation& v : rep.violations)
      C = std::max(C, fit_envelope(rep.phi_values[v.smaller], rep.phi_values[v.larger],
                                   radii[v.larger] - radii[v.smaller], E0));
    rep.fitted_C = C;
  }
  return rep;
}

void write_report_csv(std::ostream& os, const EntropyReport& r) {
  os << "R,Phi,Psi,tol,violation\n";
  for (std::size_t k = 0; k < r.radii.size(); ++k) {
    bool flagged = false;
    for (const Violation& v : r.violations) flagged = flagged || v.smaller == k || v.larger == k;
    os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{}\n", r.radii[k], r.phi_values[k], r.psi_values[k],
                      r.tol_quad[k], flagged ? 1 : 0);
  }
}

std::string report_json(const EntropyReport& r) {
  nlohmann::ordered_json j;
  j["center"] = {{"x", r.center.x}, {"t", r.center.t}};
  j["radii"] = r.radii;
  j["phi"] = r.phi_values;
  j["psi"] = r.psi_values;
  j["tol_quad"] = r.tol_quad;
  j["tol"] = r.tol;
  j["theta_estimate"] = r.theta_estimate;
  j["soliton_residuals"] = r.soliton_residuals;
  j["supported"] = r.supported;
  auto list = [](const std::vector<Violation>& vs) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const Violation& v : vs) a.push_back({{"smaller", v.smaller}, {"larger", v.larger}, {"excess", v.excess}});
    return a;
  };
  j["violations"] = list(r.violations);
  j["psi_violations"] = list(r.psi_violations);
  if (r.fitted_C) j["fitted_C"] = *r.fitted_C;
  return j.dump(2);
}

SandwichResult phi_psi_equivalence_check(const DensitySource& src, const SpacetimePoint& z0,
                                         const std::vector<double>& radii, const Cutoff& phi, double c_max,
                                         const SlabOptions& opt) {
  SandwichResult out;
  out.c_max = c_max;
  int counted = 0;
  for (double R : radii) {
    const double psi1 = psi_entropy(src, z0, R, phi, opt);
    const double phi2 = phi_entropy(src, z0, 2.0 * R, phi);
    const double psi2 = psi_entropy(src, z0, 2.0 * R, phi, opt);
    if (phi2 < 1e-300 || psi1 < 1e-300 || psi2 < 1e-300) continue;
    out.psi_over_phi = std::max(out.psi_over_phi, psi1 / phi2);
    out.phi_over_psi = std::max(out.phi_over_psi, phi2 / psi2);
    ++counted;
  }
  out.vacuous = counted == 0;
  out.within_bound = out.vacuous || (std::isfinite(out.psi_over_phi) && std::isfinite(out.phi_over_psi) &&
                                     out.psi_over_phi <= c_max && out.phi_over_psi <= c_max);
  return out;
}

}  // namespace ymflow
