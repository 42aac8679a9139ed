#pragma once

#include "ymflow/lattice.hpp"

namespace ymflow {

/// Cutoff function phi with its gradient sampled on the grid.
/// bump(): phi = 1 on B_{iota/2}(x0), 0 outside B_iota(x0), smooth radial
/// splice between. one(): phi = 1 everywhere (a cutoff whose unit region
/// covers the whole torus).
class Cutoff {
 public:
  static Cutoff bump(const Grid& grid, const Point& x0, double iota);
  static Cutoff one(const Grid& grid);

  const Grid& grid() const { return phi_.grid(); }
  const ScalarField& phi() const { return phi_; }
  /// n components per site.
  const Field& grad() const { return grad_; }
  bool is_one() const { return unit_; }
  const Point& center() const { return x0_; }
  double iota() const { return iota_; }

  /// Analytic values at an arbitrary point.
  double value_at(const Point& x) const;

 private:
  ScalarField phi_;
  Field grad_;
  Point x0_;
  double iota_ = 0.0;
  bool unit_ = false;
};

}  // namespace ymflow
