#include "ymflow/cutoff.hpp"

#include <cmath>

#include <fmt/core.h>

#include "ymflow/bump.hpp"
#include "ymflow/errors.hpp"
#include "ymflow/source.hpp"

namespace ymflow {

Cutoff Cutoff::bump(const Grid& grid, const Point& x0, double iota) {
  if (!(iota > 0.0) || iota > grid.L() / 4.0 * (1.0 + 1e-12)) {
    throw ValidationError("cutoff radius iota must lie in (0, L/4]");
  }
  if (static_cast<int>(x0.size()) != grid.n()) throw DimensionError("cutoff center dimension");
  Cutoff c;
  c.phi_ = ScalarField(grid, 1);
  c.grad_ = Field(grid, grid.n());
  c.x0_ = x0;
  c.iota_ = iota;
  for (std::size_t s = 0; s < grid.sites(); ++s) {
    const Point y = min_image(grid, grid.position(s), x0);
    double r2 = 0.0;
    for (double v : y) r2 += v * v;
    const double r = std::sqrt(r2);
    c.phi_[s] = radial_bump(r, 0.5 * iota, iota);
    const double dr = radial_bump_deriv(r, 0.5 * iota, iota);
    if (dr != 0.0) {
      for (int a = 0; a < grid.n(); ++a) c.grad_.at(s)[a] = dr * y[a] / r;
    }
  }
  return c;
}

Cutoff Cutoff::one(const Grid& grid) {
  Cutoff c;
  c.phi_ = ScalarField(grid, 1, 1.0);
  c.grad_ = Field(grid, grid.n());
  c.x0_ = Point(grid.n(), 0.0);
  c.iota_ = grid.L();
  c.unit_ = true;
  return c;
}

double Cutoff::value_at(const Point& x) const {
  if (unit_) return 1.0;
  return radial_bump(torus_distance(grid(), x, x0_), 0.5 * iota_, iota_);
}

bool DensitySource::contains(double t) const { return t >= t_min() && t <= t_max(); }

void DensitySource::require_window(double a, double b, const char* what) const {
  if (a < t_min() || b > t_max() || a > b) {
    throw RangeError(fmt::format("{}: time window [{:g}, {:g}] outside [{:g}, {:g}]", what, a, b,
                                 t_min(), t_max()));
  }
}

ScalarField ConnectionSource::density(double t) const {
  return curvature_density(curvature(connection(t)));
}

}  // namespace ymflow
