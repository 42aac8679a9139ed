#include "ymflow/singular.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "json.hpp"
#include "ymflow/errors.hpp"
#include "ymflow/parallel.hpp"

namespace ymflow {

double parabolic_dist(const SpacetimePoint& a, const SpacetimePoint& b, double period) {
  const Point d = displacement(a.x, b.x, period);
  double r2 = 0.0;
  for (double v : d) r2 += v * v;
  return std::max(std::sqrt(r2), std::sqrt(std::abs(a.t - b.t)));
}

namespace {

struct Center {
  SpacetimePoint z;
  std::size_t site;
  std::vector<double> psi;  // one per radius
};

std::vector<double> scan_times(const DensitySource& src, const ScanOptions& opt) {
  if (!opt.times.empty()) return opt.times;
  if (!(opt.time_stride > 0.0)) throw ValidationError("scan needs explicit times or a positive time stride");
  const double rmax = opt.radii.back();
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double t = src.t_max() - k * opt.time_stride;
    if (t - 4.0 * rmax * rmax < src.t_min()) break;
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Sites where a density slice is nonzero.
struct Support {
  std::vector<std::size_t> sites;
  std::vector<Point> positions;
  std::vector<double> values;
};

// Density slices are reused across centres and radii.
class DensityCache {
 public:
  explicit DensityCache(const DensitySource& src) : src_(src) {}
  const ScalarField& at(double t) {
    auto it = cache_.find(t);
    if (it == cache_.end()) it = cache_.emplace(t, std::make_unique<ScalarField>(src_.density(t))).first;
    return *it->second;
  }
  const Support& support(double t) {
    auto it = supports_.find(t);
    if (it != supports_.end()) return it->second;
    const ScalarField& rho = at(t);
    Support s;
    for (std::size_t k = 0; k < rho.size(); ++k) {
      if (rho[k] == 0.0) continue;
      s.sites.push_back(k);
      s.positions.push_back(rho.grid().position(k));
      s.values.push_back(rho[k]);
    }
    return supports_.emplace(t, std::move(s)).first->second;
  }
  void clear() {
    cache_.clear();
    supports_.clear();
  }

 private:
  const DensitySource& src_;
  std::map<double, std::unique_ptr<ScalarField>> cache_;
  std::map<double, Support> supports_;
};

std::vector<Center> psi_table(const DensitySource& src, const ScanOptions& opt) {
  if (opt.radii.empty()) throw ValidationError("scan needs at least one radius");
  for (std::size_t i = 1; i < opt.radii.size(); ++i)
    if (!(opt.radii[i] > opt.radii[i - 1])) throw ValidationError("scan radii must be strictly ascending");
  if (opt.spatial_stride < 1) throw ValidationError("spatial stride must be >= 1");
  const Grid& g = src.grid();
  const Cutoff one = Cutoff::one(g);
  for (double R : opt.radii) check_entropy_radius(g, R, one);

  std::vector<std::size_t> sites;
  std::vector<int> idx(g.n());
  for (std::size_t s = 0; s < g.sites(); ++s) {
    g.coords(s, idx);
    bool keep = true;
    for (int v : idx) keep = keep && v % opt.spatial_stride == 0;
    if (keep) sites.push_back(s);
  }

  std::vector<Center> out;
  DensityCache cache(src);
  for (double t : scan_times(src, opt)) {
    const std::size_t first = out.size();
    for (std::size_t s : sites) out.push_back({{g.position(s), t}, s, std::vector<double>(opt.radii.size(), 0.0)});
    for (std::size_t r = 0; r < opt.radii.size(); ++r) {
      const double R = opt.radii[r];
      src.require_window(t - 4.0 * R * R, t - R * R, "scan slab");
      for (const auto& [tk, wk] : psi_slab_nodes(t, R, opt.slab)) {
        const Support& sup = cache.support(tk);
        if (sup.sites.empty()) continue;
        const double tau = t - tk;
        const double norm = std::pow(4.0 * std::numbers::pi * tau, -0.5 * g.n()) * g.cell_volume();
        parallel_for(first, out.size(), [&](std::size_t lo, std::size_t hi) {
          std::vector<double> terms(sup.sites.size());
          for (std::size_t c = lo; c < hi; ++c) {
            for (std::size_t k = 0; k < sup.sites.size(); ++k) {
              double r2 = 0.0;
              for (int a = 0; a < g.n(); ++a) {
                const double v = wrap_displacement(sup.positions[k][a] - out[c].z.x[a], g.L());
                r2 += v * v;
              }
              terms[k] = sup.values[k] * std::exp(-r2 / (4.0 * tau));
            }
            out[c].psi[r] += wk * norm * pairwise_sum(terms);
          }
        });
      }
    }
    cache.clear();
  }
  return out;
}

SingularSetEstimate estimate(const DensitySource& src, double eps, const ScanOptions& opt,
                             const std::vector<Center>& table, DensityCache& cache) {
  const Grid& g = src.grid();
  SingularSetEstimate e;
  e.epsilon0 = eps;
  e.r_min = opt.radii.front();
  e.r_max = opt.radii.back();
  e.spatial_stride = opt.spatial_stride;
  e.delta = opt.delta;
  e.centers_scanned = table.size();
  for (const Center& c : table) {
    const double mn = *std::min_element(c.psi.begin(), c.psi.end());
    if (mn >= eps) {
      e.flagged.push_back({c.z, mn});
      continue;
    }
    for (std::size_t r = 0; r < opt.radii.size(); ++r) {
      if (c.psi[r] >= eps) continue;
      const double rho_r = opt.delta * opt.radii[r];
      double sup = 0.0;
      for (int k = 0; k <= 4; ++k) {
        const double t = c.z.t - rho_r * rho_r * k / 4.0;
        if (!src.contains(t)) continue;
        const Support& supp = cache.support(t);
        for (std::size_t k = 0; k < supp.sites.size(); ++k)
          if (supp.values[k] > sup && torus_distance(g, supp.positions[k], c.z.x) < rho_r) sup = supp.values[k];
      }
      e.empirical_C = std::max(e.empirical_C, sup * std::pow(rho_r, 4));
    }
  }
  std::sort(e.flagged.begin(), e.flagged.end(), [](const FlaggedPoint& a, const FlaggedPoint& b) {
    if (a.z.x != b.z.x) return a.z.x < b.z.x;
    return a.z.t < b.z.t;
  });
  return e;
}

}  // namespace

std::vector<SingularSetEstimate> eps_regularity_sweep(const DensitySource& src, const std::vector<double>& epsilons,
                                                      const ScanOptions& opt) {
  if (!(opt.delta > 0.0 && opt.delta <= 1.0)) throw ValidationError("scan delta must lie in (0, 1]");
  const std::vector<Center> table = psi_table(src, opt);
  DensityCache cache(src);
  std::vector<SingularSetEstimate> out;
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw ValidationError("epsilon0 must be positive");
    out.push_back(estimate(src, eps, opt, table, cache));
  }
  return out;
}

SingularSetEstimate eps_regularity_scan(const DensitySource& src, double epsilon0, const ScanOptions& opt) {
  return eps_regularity_sweep(src, {epsilon0}, opt).front();
}

void write_singular_csv(std::ostream& os, const SingularSetEstimate& e) {
  const std::size_t n = e.flagged.empty() ? 0 : e.flagged.front().z.x.size();
  for (std::size_t i = 0; i < n; ++i) os << 'x' << (i + 1) << ',';
  os << "t,min_psi\n";
  for (const FlaggedPoint& f : e.flagged) {
    for (double v : f.z.x) os << fmt::format("{:.17g},", v);
    os << fmt::format("{:.17g},{:.17g}\n", f.z.t, f.min_psi);
  }
}

BoxDimension parabolic_box_dimension(const std::vector<SpacetimePoint>& points, const std::vector<double>& radii) {
  if (radii.size() < 2) throw ValidationError("box dimension needs at least two radii");
  if (points.empty()) throw ValidationError("box dimension needs at least one point");
  BoxDimension b;
  b.radii = radii;
  for (double r : radii) {
    if (!(r > 0.0)) throw ValidationError("box radii must be positive");
    std::set<std::vector<long long>> boxes;
    for (const SpacetimePoint& p : points) {
      std::vector<long long> key;
      key.reserve(p.x.size() + 1);
      for (double v : p.x) key.push_back(static_cast<long long>(std::floor(v / r)));
      key.push_back(static_cast<long long>(std::floor(p.t / (r * r))));
      boxes.insert(std::move(key));
    }
    b.counts.push_back(boxes.size());
  }
  b.degenerate = std::all_of(b.counts.begin(), b.counts.end(), [&](std::size_t c) { return c == b.counts.front(); });
  const std::size_t m = radii.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> X(m), Y(m);
  for (std::size_t i = 0; i < m; ++i) {
    X[i] = std::log(1.0 / radii[i]);
    Y[i] = std::log(static_cast<double>(b.counts[i]));
    sx += X[i];
    sy += Y[i];
    sxx += X[i] * X[i];
    sxy += X[i] * Y[i];
  }
  const double den = m * sxx - sx * sx;
  if (b.degenerate || den == 0.0) {
    b.slope = 0.0;
    b.intercept = Y[0];
  } else {
    b.slope = (m * sxy - sx * sy) / den;
    b.intercept = (sy - b.slope * sx) / m;
  }
  double rr = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = Y[i] - (b.intercept + b.slope * X[i]);
    rr += d * d;
  }
  b.residual = std::sqrt(rr / m);
  return b;
}

std::string box_dimension_json(const BoxDimension& b) {
  nlohmann::ordered_json j;
  j["slope"] = b.slope;
  j["intercept"] = b.intercept;
  j["residual"] = b.residual;
  j["degenerate"] = b.degenerate;
  j["radii"] = b.radii;
  j["counts"] = b.counts;
  return j.dump(2);
}

Stratum stratum_dim(const DensitySamples& d, double tol) {
  const int n = d.n;
  const std::size_t count = d.points.size();
  if (d.theta.size() != count) throw ValidationError("density samples: point and value counts differ");
  if (count < static_cast<std::size_t>(n + 2)) {
    throw InsufficientDataError(fmt::format("stratum_dim needs at least {} samples, got {}", n + 2, count));
  }
  if (!(tol >= 0.0)) throw ValidationError("stratum tolerance must be >= 0");
  std::size_t origin = count;
  for (std::size_t i = 0; i < count; ++i) {
    if (static_cast<int>(d.points[i].x.size()) != n) throw DimensionError("density sample has the wrong dimension");
    if (!std::isfinite(d.theta[i]) || d.theta[i] < 0.0) throw ValidationError("density values must be finite and >= 0");
    bool zero = std::abs(d.points[i].t) <= 1e-12;
    for (double v : d.points[i].x) zero = zero && std::abs(v) <= 1e-12;
    if (zero && origin == count) origin = i;
  }
  if (origin == count) throw ValidationError("density samples must include the origin");
  const double top = d.theta[origin];
  for (std::size_t i = 0; i < count; ++i) {
    if (d.theta[i] > top + tol) {
      throw ValidationError(fmt::format("Theta at sample {} exceeds Theta(0) = {:.17g} by more than tol", i, top));
    }
  }

  Stratum s;
  s.theta_max = top;
  std::vector<std::size_t> u, v;
  for (std::size_t i = 0; i < count; ++i) {
    if (d.theta[i] < top - tol) continue;
    u.push_back(i);
    if (d.points[i].t == 0.0) v.push_back(i);
  }
  s.u_count = u.size();
  s.v_count = v.size();

  Eigen::MatrixXd A(static_cast<Eigen::Index>(v.size()), n);
  for (std::size_t r = 0; r < v.size(); ++r)
    for (int c = 0; c < n; ++c) A(static_cast<Eigen::Index>(r), c) = d.points[v[r]].x[c];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const double cut = tol * std::sqrt(static_cast<double>(v.size()));
  const Eigen::VectorXd sv = svd.singularValues();
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) <= cut) continue;
    Point b(n);
    for (int c = 0; c < n; ++c) b[c] = svd.matrixV()(c, k);
    s.basis.push_back(std::move(b));
  }
  s.v_dimension = static_cast<int>(s.basis.size());

  // Distance from x to span(basis).
  auto off_span = [&](const Point& x) {
    Point r = x;
    for (const Point& b : s.basis) {
      double dot = 0.0;
      for (int c = 0; c < n; ++c) dot += x[c] * b[c];
      for (int c = 0; c < n; ++c) r[c] -= dot * b[c];
    }
    double r2 = 0.0;
    for (double q : r) r2 += q * q;
    return std::sqrt(r2);
  };
  bool witnessed = false, contained = true;
  for (std::size_t i = 0; i < count; ++i) {
    if (d.points[i].t == 0.0 || off_span(d.points[i].x) > tol) continue;
    witnessed = true;
    if (d.theta[i] < top - tol) contained = false;
  }
  s.product = witnessed && contained;
  s.dimension = s.v_dimension + (s.product ? 2 : 0);
  return s;
}

DensitySamples dilate_samples(const DensitySamples& d, double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("scale lambda must be positive");
  DensitySamples out = d;
  for (SpacetimePoint& p : out.points) {
    for (double& v : p.x) v /= lambda;
    p.t /= lambda * lambda;
  }
  return out;
}

void write_density_samples_csv(std::ostream& os, const DensitySamples& d) {
  for (int i = 0; i < d.n; ++i) os << 'x' << (i + 1) << ',';
  os << "t,theta\n";
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    for (double v : d.points[i].x) os << fmt::format("{:.17g},", v);
    os << fmt::format("{:.17g},{:.17g}\n", d.points[i].t, d.theta[i]);
  }
}

DensitySamples read_density_samples_csv(std::istream& is) {
  DensitySamples d;
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("density samples: missing header");
  const auto commas = std::count(line.begin(), line.end(), ',');
  d.n = static_cast<int>(commas) - 1;
  if (d.n < 1 || line.rfind("x1", 0) != 0) throw ValidationError("density samples: header must be x1,...,xn,t,theta");
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> v;
    std::istringstream cells(line);
    std::string cell;
    try {
      while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ValidationError(fmt::format("density samples line {}: not a number", row));
    }
    if (static_cast<int>(v.size()) != d.n + 2) {
      throw ValidationError(fmt::format("density samples line {}: expected {} fields", row, d.n + 2));
    }
    d.points.push_back({Point(v.begin(), v.begin() + d.n), v[d.n]});
    d.theta.push_back(v[d.n + 1]);
  }
  return d;
}

}  // namespace ymflow
