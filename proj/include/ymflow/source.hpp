#pragma once

/// @file source.hpp
/// @brief Time-dependent curvature densities that the entropy and singular-set
/// code can read: recorded flows, rescaled views and synthetic profiles.

#include "ymflow/gauge.hpp"
#include "ymflow/lattice.hpp"

namespace ymflow {

class DensitySource {
 public:
  virtual ~DensitySource() = default;
  virtual const Grid& grid() const = 0;
  virtual double t_min() const = 0;
  virtual double t_max() const = 0;
  /// |F|^2 sampled on the grid at time t; RangeError outside [t_min, t_max].
  virtual ScalarField density(double t) const = 0;

  bool contains(double t) const;
  /// Throws RangeError naming `what` unless [a, b] lies inside the window.
  void require_window(double a, double b, const char* what) const;
};

/// A density that comes from an actual connection at every time.
class ConnectionSource : public DensitySource {
 public:
  virtual int m() const = 0;
  virtual ConnectionField connection(double t) const = 0;
  ScalarField density(double t) const override;
};

}  // namespace ymflow
