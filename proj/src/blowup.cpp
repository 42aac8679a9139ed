#include "ymflow/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "ymflow/errors.hpp"
#include "ymflow/parallel.hpp"

namespace ymflow {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("scale lambda must be positive and finite");
}

}  // namespace

RescaledConnectionView::RescaledConnectionView(const ConnectionSource& base, SpacetimePoint z0, double lambda)
    : RescaledConnectionView(base, z0, lambda,
                             Grid(base.grid().n(), base.grid().N(), base.grid().L() / (lambda > 0 ? lambda : 1.0))) {}

RescaledConnectionView::RescaledConnectionView(const ConnectionSource& base, SpacetimePoint z0, double lambda,
                                               const Grid& target)
    : base_(&base), z0_(std::move(z0)), lambda_(lambda), target_(target) {
  check_lambda(lambda);
  if (static_cast<int>(z0_.x.size()) != base.grid().n() || target.n() != base.grid().n()) {
    throw DimensionError("rescaled view: centre or target grid has the wrong dimension");
  }
}

Point RescaledConnectionView::base_point(const Point& x) const {
  Point p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = lambda_ * x[i] + z0_.x[i];
  return p;
}

ConnectionField RescaledConnectionView::materialize(const Grid& g, double t) const {
  if (g.n() != target_.n()) throw DimensionError("materialize: grid dimension differs from the view");
  const double bt = base_time(t);
  if (!base_->contains(bt)) {
    throw RangeError(fmt::format("rescaled view: base time {:.17g} outside [{:.17g}, {:.17g}]", bt, base_->t_min(),
                                 base_->t_max()));
  }
  const ConnectionField src = base_->connection(bt);
  const int comps = src.field().components();
  Field out(g, comps);
  parallel_for(0, g.sites(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      const std::vector<double> v = interp(src.field(), base_point(g.position(s)));
      double* dst = out.at(s);
      for (int c = 0; c < comps; ++c) dst[c] = lambda_ * v[c];
    }
  });
  return ConnectionField(src.m(), std::move(out));
}

ConnectionField RescaledConnectionView::connection(double t) const { return materialize(target_, t); }

RescaledConnectionView rescale_connection(const ConnectionSource& base, const SpacetimePoint& z0, double lambda) {
  check_lambda(lambda);
  return RescaledConnectionView(base, z0, lambda);
}

ScalingDeviation curvature_scaling_check(const RescaledConnectionView& view,
                                         const std::vector<SpacetimePoint>& samples) {
  std::map<double, std::pair<CurvatureField, CurvatureField>> cache;
  const double l2 = view.lambda() * view.lambda();
  ScalingDeviation out;
  for (const SpacetimePoint& z : samples) {
    auto it = cache.find(z.t);
    if (it == cache.end()) {
      CurvatureField fv = curvature(view.connection(z.t));
      CurvatureField fb = curvature(view.base().connection(view.base_time(z.t)));
      it = cache.emplace(z.t, std::make_pair(std::move(fv), std::move(fb))).first;
    }
    const std::vector<double> a = interp(it->second.first.field(), z.x);
    const std::vector<double> b = interp(it->second.second.field(), view.base_point(z.x));
    for (std::size_t c = 0; c < a.size(); ++c) {
      out.max_deviation = std::max(out.max_deviation, std::abs(a[c] - l2 * b[c]));
      out.max_reference = std::max(out.max_reference, std::abs(l2 * b[c]));
    }
  }
  return out;
}

EntropyScaling entropy_scaling_check(const ConnectionSource& base, const SpacetimePoint& z0, double R,
                                     const SlabOptions& opt) {
  const RescaledConnectionView view(base, z0, R);
  const SpacetimePoint origin{Point(z0.x.size(), 0.0), 0.0};
  const Cutoff one_base = Cutoff::one(base.grid());
  const Cutoff one_view = Cutoff::one(view.grid());
  EntropyScaling s;
  s.phi_base = phi_entropy(base, z0, R, one_base);
  s.phi_rescaled = phi_entropy(view, origin, 1.0, one_view);
  s.psi_base = psi_entropy(base, z0, R, one_base, opt);
  s.psi_rescaled = psi_entropy(view, origin, 1.0, one_view, opt);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); };
  s.phi_relative = rel(s.phi_base, s.phi_rescaled);
  s.psi_relative = rel(s.psi_base, s.psi_rescaled);
  return s;
}

SpacetimeMeasure parabolic_dilate(const SpacetimeMeasure& m, const SpacetimePoint& z0, double lambda) {
  check_lambda(lambda);
  if (static_cast<int>(z0.x.size()) != m.n) throw DimensionError("dilation centre has the wrong dimension");
  SpacetimeMeasure out;
  out.n = m.n;
  out.period = m.period / lambda;
  out.layer_dt = m.layer_dt / (lambda * lambda);
  out.origin = m.origin.empty() ? "parabolic dilation" : m.origin + "; parabolic dilation";
  const double wf = std::pow(lambda, 2 - m.n);
  out.atoms.reserve(m.atoms.size());
  for (const Atom& a : m.atoms) {
    Point d = displacement(a.x, z0.x, m.period);
    for (double& v : d) v /= lambda;
    out.atoms.push_back({std::move(d), (a.t - z0.t) / (lambda * lambda), wf * a.w});
  }
  return out;
}

SpacetimeMeasure euclidean_dilate(const SpacetimeMeasure& m, const Point& x0, double lambda) {
  check_lambda(lambda);
  if (static_cast<int>(x0.size()) != m.n) throw DimensionError("dilation centre has the wrong dimension");
  SpacetimeMeasure out;
  out.n = m.n;
  out.period = m.period / lambda;
  out.layer_dt = m.layer_dt;
  out.origin = m.origin.empty() ? "euclidean dilation" : m.origin + "; euclidean dilation";
  const double wf = std::pow(lambda, 4 - m.n);
  out.atoms.reserve(m.atoms.size());
  for (const Atom& a : m.atoms) {
    Point d = displacement(a.x, x0, m.period);
    for (double& v : d) v /= lambda;
    out.atoms.push_back({std::move(d), a.t, wf * a.w});
  }
  return out;
}

double theta_dilation_check(const SpacetimeMeasure& m, const SpacetimePoint& z0, double lambda,
                            const SpacetimePoint& z, double r) {
  const SpacetimeMeasure d = parabolic_dilate(m, z0, lambda);
  SpacetimePoint back{Point(z.x.size()), z0.t + lambda * lambda * z.t};
  for (std::size_t i = 0; i < z.x.size(); ++i) back.x[i] = z0.x[i] + lambda * z.x[i];
  return std::abs(theta_slice(d, z, r) - theta_slice(m, back, lambda * r));
}

SpacetimeMeasure measure_from_source(const DensitySource& src, const MeasureWindow& w) {
  const Grid& g = src.grid();
  if (w.layers < 1) throw ValidationError("measure window needs at least one layer");
  if (!(w.t_end > w.t_begin)) throw ValidationError("measure window needs t_end > t_begin");
  if (w.radius > 0.0 && static_cast<int>(w.center.size()) != g.n()) {
    throw DimensionError("measure window centre has the wrong dimension");
  }
  src.require_window(w.t_begin, w.t_end, "measure window");
  SpacetimeMeasure m;
  m.n = g.n();
  m.period = g.L();
  m.layer_dt = (w.t_end - w.t_begin) / w.layers;
  m.origin = fmt::format("density 1/2|F|^2 on [{:.17g}, {:.17g}]", w.t_begin, w.t_end);
  std::vector<char> inside(g.sites(), 1);
  if (w.radius > 0.0) {
    for (std::size_t s = 0; s < g.sites(); ++s) {
      const Point d = min_image(g, g.position(s), w.center);
      for (double v : d)
        if (std::abs(v) > w.radius) inside[s] = 0;
    }
  }
  const double cell = g.cell_volume();
  for (int k = 0; k < w.layers; ++k) {
    const double t = w.t_begin + (k + 0.5) * m.layer_dt;
    const ScalarField rho = src.density(t);
    for (std::size_t s = 0; s < g.sites(); ++s) {
      if (!inside[s] || rho[s] == 0.0) continue;
      m.atoms.push_back({g.position(s), t, 0.5 * rho[s] * cell * m.layer_dt});
    }
  }
  return m;
}

SelfSimilarDensity::SelfSimilarDensity(Point center, double T, double amplitude, double period)
    : center_(std::move(center)), T_(T), amplitude_(amplitude), period_(period) {
  if (center_.empty()) throw DimensionError("self-similar density needs a centre");
  if (!std::isfinite(T) || !(amplitude >= 0.0) || period < 0.0) {
    throw ValidationError("self-similar density: bad T, amplitude or period");
  }
}

double SelfSimilarDensity::value(const Point& x, double t) const {
  const double tau = T_ - t;
  if (!(tau > 0.0)) return 0.0;
  const Point d = displacement(x, center_, period_);
  double r2 = 0.0;
  for (double v : d) r2 += v * v;
  const double s2 = r2 / tau;
  if (s2 >= 1.0) return 0.0;
  const double f = std::pow(1.0 - s2, 4);
  return amplitude_ * f / (tau * tau);
}

SampledDensity::SampledDensity(const AnalyticDensity& f, const Grid& grid, double t_min, double t_max)
    : f_(&f), grid_(grid), t0_(t_min), t1_(t_max) {
  if (f.n() != grid.n()) throw DimensionError("sampled density: grid dimension differs from the density");
  if (!(t_max > t_min)) throw ValidationError("sampled density: empty time window");
}

ScalarField SampledDensity::density(double t) const {
  require_window(t, t, "sampled density");
  ScalarField out(grid_, 1);
  parallel_for(0, grid_.sites(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) out[s] = f_->value(grid_.position(s), t);
  });
  return out;
}

double uniform_bound(const SpacetimeMeasure& m, const SpacetimePoint& z, double r_max, int levels) {
  if (!(r_max > 0.0) || levels < 0) throw ValidationError("uniform bound needs r_max > 0 and levels >= 0");
  std::vector<double> dist;
  dist.reserve(m.atoms.size());
  for (const Atom& a : m.atoms) {
    const Point d = displacement(a.x, z.x, m.period);
    double r2 = 0.0;
    for (double v : d) r2 += v * v;
    dist.push_back(std::max(std::sqrt(r2), std::sqrt(std::abs(a.t - z.t))));
  }
  double best = 0.0;
  for (int k = 0; k <= levels; ++k) {
    const double r = std::ldexp(r_max, -k);
    std::vector<double> w;
    for (std::size_t i = 0; i < dist.size(); ++i)
      if (dist[i] < r) w.push_back(m.atoms[i].w);
    best = std::max(best, std::pow(r, 2 - m.n) * pairwise_sum(w));
  }
  return best;
}

namespace {

void finish_tangent(TangentSequence& out, double lambda, SpacetimeMeasure m, const TangentOptions& opt) {
  out.lambdas.push_back(lambda);
  out.masses.push_back(m.mass());
  out.uniform_bounds.push_back(uniform_bound(m, {Point(m.n, 0.0), 0.0}, opt.radius, opt.bound_levels));
  out.measures.push_back(std::move(m));
}

void check_tangent_args(const std::vector<double>& lambdas, const TangentOptions& opt) {
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    check_lambda(lambdas[i]);
    if (i > 0 && !(lambdas[i] < lambdas[i - 1])) throw ValidationError("tangent scales must be strictly descending");
  }
  if (!(opt.radius > 0.0) || !(opt.depth > 0.0) || opt.layers < 1 || opt.cells < 1) {
    throw ValidationError("tangent window needs positive radius, depth, layers and cells");
  }
}

}  // namespace

TangentSequence tangent_measure_approx(const DensitySource& src, const SpacetimePoint& z0,
                                       const std::vector<double>& lambdas, const TangentOptions& opt) {
  check_tangent_args(lambdas, opt);
  TangentSequence out;
  for (double lambda : lambdas) {
    const double a = z0.t - lambda * lambda * opt.depth;
    if (a < src.t_min() || z0.t > src.t_max() || 2.0 * lambda * opt.radius > src.grid().L()) {
      out.truncated = true;
      out.notice = fmt::format("window for lambda = {:.17g} leaves the source; returning {} of {} measures", lambda,
                               out.measures.size(), lambdas.size());
      break;
    }
    MeasureWindow w{z0.x, lambda * opt.radius, a, z0.t, opt.layers};
    finish_tangent(out, lambda, parabolic_dilate(measure_from_source(src, w), z0, lambda), opt);
  }
  return out;
}

TangentSequence tangent_measure_approx(const AnalyticDensity& f, const SpacetimePoint& z0,
                                       const std::vector<double>& lambdas, const TangentOptions& opt) {
  check_tangent_args(lambdas, opt);
  const int n = f.n();
  if (static_cast<int>(z0.x.size()) != n) throw DimensionError("tangent centre has the wrong dimension");
  const double step = opt.radius / opt.cells;
  const int side = 2 * opt.cells;
  std::size_t count = 1;
  for (int i = 0; i < n; ++i) count *= static_cast<std::size_t>(side);
  const double dt = opt.depth / opt.layers;
  TangentSequence out;
  for (double lambda : lambdas) {
    SpacetimeMeasure m;
    m.n = n;
    m.period = f.period() / lambda;
    m.layer_dt = dt;
    m.origin = fmt::format("closed-form density, parabolic dilation by {:.17g}", lambda);
    // Base weight 1/2 f (lambda step)^n lambda^2 dt, times lambda^{2-n}.
    const double wf = 0.5 * std::pow(step, n) * dt * std::pow(lambda, 4);
    std::vector<int> idx(n);
    for (int k = 0; k < opt.layers; ++k) {
      const double t = -opt.depth + (k + 0.5) * dt;
      const double bt = z0.t + lambda * lambda * t;
      for (std::size_t c = 0; c < count; ++c) {
        std::size_t rest = c;
        Point xi(n), bx(n);
        for (int i = n - 1; i >= 0; --i) {
          idx[i] = static_cast<int>(rest % side);
          rest /= side;
          xi[i] = (idx[i] - opt.cells + 0.5) * step;
          bx[i] = z0.x[i] + lambda * xi[i];
        }
        const double v = f.value(bx, bt);
        if (v != 0.0) m.atoms.push_back({std::move(xi), t, wf * v});
      }
    }
    finish_tangent(out, lambda, std::move(m), opt);
  }
  return out;
}

double windowed_tv(const SpacetimeMeasure& a, const SpacetimeMeasure& b, const TvWindow& w) {
  if (a.n != b.n) throw DimensionError("windowed_tv: measures of different dimension");
  if (!(w.radius > 0.0) || !(w.t_hi > w.t_lo) || w.cells < 1) throw ValidationError("windowed_tv: bad window");
  std::map<std::vector<int>, double> diff;
  auto bin = [&](const Atom& at, std::vector<int>& key) {
    key.assign(at.x.size() + 1, 0);
    for (std::size_t i = 0; i < at.x.size(); ++i) {
      if (!(std::abs(at.x[i]) < w.radius)) return false;
      key[i] = static_cast<int>(std::floor((at.x[i] + w.radius) / (2 * w.radius) * w.cells));
    }
    if (at.t < w.t_lo || at.t >= w.t_hi) return false;
    key.back() = static_cast<int>(std::floor((at.t - w.t_lo) / (w.t_hi - w.t_lo) * w.cells));
    for (int& k : key) k = std::clamp(k, 0, w.cells - 1);
    return true;
  };
  double ma = 0.0, mb = 0.0;
  std::vector<int> key;
  for (const Atom& at : a.atoms)
    if (bin(at, key)) {
      diff[key] += at.w;
      ma += at.w;
    }
  for (const Atom& at : b.atoms)
    if (bin(at, key)) {
      diff[key] -= at.w;
      mb += at.w;
    }
  const double scale = std::max(ma, mb);
  if (scale == 0.0) return 0.0;
  std::vector<double> parts;
  parts.reserve(diff.size());
  for (const auto& kv : diff) parts.push_back(std::abs(kv.second));
  return pairwise_sum(parts) / scale;
}

SpacetimeMeasure self_similar_atoms(int n, int max_layer, int q, double amplitude) {
  if (n < 1 || max_layer < 0 || q < 0 || q > 12) throw ValidationError("self_similar_atoms: bad parameters");
  SpacetimeMeasure m;
  m.n = n;
  m.origin = "exact self-similar atoms";
  const int side = (1 << q);
  const double step = std::ldexp(1.0, -q);
  std::vector<Point> xis;
  std::vector<double> fs;
  std::vector<int> idx(n, -side);
  while (true) {
    Point xi(n);
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      xi[i] = idx[i] * step;
      r2 += xi[i] * xi[i];
    }
    if (r2 < 1.0) {
      xis.push_back(xi);
      fs.push_back(std::pow(1.0 - r2, 4));
    }
    int i = n - 1;
    while (i >= 0 && ++idx[i] > side) idx[i--] = -side;
    if (i < 0) break;
  }
  const double cell = std::ldexp(1.0, -q * n);
  for (int k = 0; k <= max_layer; ++k) {
    const double scale = std::ldexp(1.0, -k);
    const double t = -std::ldexp(1.0, -2 * k);
    const double layer = std::ldexp(1.0, -k * (n - 2));
    for (std::size_t j = 0; j < xis.size(); ++j) {
      Point x(n);
      for (int i = 0; i < n; ++i) x[i] = scale * xis[j][i];
      m.atoms.push_back({std::move(x), t, amplitude * fs[j] * layer * 0.75 * cell});
    }
  }
  return m;
}

}  // namespace ymflow
