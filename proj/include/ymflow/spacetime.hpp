#pragma once

/// @file spacetime.hpp
/// @brief Spacetime points and finite atom measures.

#include <iosfwd>
#include <string>
#include <vector>

#include "ymflow/lattice.hpp"

namespace ymflow {

struct SpacetimePoint {
  Point x;
  double t = 0.0;
};

struct Atom {
  Point x;
  double t = 0.0;
  double w = 0.0;
};

/// A finite sum of weighted point masses in space x time.
///
/// Atoms built from a trajectory sit on time layers `layer_dt` apart and carry
/// w = 1/2 |F|^2 h^n layer_dt. `period` is the side of the spatial torus the
/// atoms live on (0 for R^n); distances use the nearest image.
struct SpacetimeMeasure {
  int n = 0;
  double period = 0.0;
  double layer_dt = 0.0;
  std::string origin;
  std::vector<Atom> atoms;

  double mass() const;
  /// Adds an atom after checking dimension, finiteness and w >= 0.
  void add(const Point& x, double t, double w);
};

/// Displacement x - y, reduced to the nearest image when period > 0.
Point displacement(const Point& x, const Point& y, double period);

/// CSV with a "# n=<n> period=<p> layer_dt=<dt> origin=<text>" line, a header
/// "x1,...,xn,t,w" and one row per atom in %.17g.
void write_atoms_csv(std::ostream& os, const SpacetimeMeasure& m);
SpacetimeMeasure read_atoms_csv(std::istream& is);

}  // namespace ymflow
