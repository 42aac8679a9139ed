#pragma once

// Smooth step built from exp(-1/s): equal to 1 for s <= 0, 0 for s >= 1,
// infinitely differentiable, strictly decreasing on (0, 1).

#include <cmath>

namespace ymflow {

inline double exp_inv(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

inline double smooth_step_down(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const double a = exp_inv(1.0 - s), b = exp_inv(s);
  return a / (a + b);
}

/// d/ds smooth_step_down(s).
inline double smooth_step_down_deriv(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double u = 1.0 - s;
  const double a = exp_inv(u), b = exp_inv(s);
  const double da = -a / (u * u);  // d/ds exp(-1/(1-s))
  const double db = b / (s * s);
  const double den = a + b;
  return (da * den - a * (da + db)) / (den * den);
}

/// Radial bump: 1 on [0, inner], 0 beyond outer, smooth splice between.
inline double radial_bump(double r, double inner, double outer) {
  return smooth_step_down((r - inner) / (outer - inner));
}

inline double radial_bump_deriv(double r, double inner, double outer) {
  return smooth_step_down_deriv((r - inner) / (outer - inner)) / (outer - inner);
}

}  // namespace ymflow
