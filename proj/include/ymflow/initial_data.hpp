#pragma once

#include <cstdint>
#include <vector>

#include "ymflow/algebra.hpp"
#include "ymflow/gauge.hpp"

namespace ymflow {

/// Gamma_j(x) = epsilon cos(k.x) v_j T with T = generator(m, 0, 1) (e3 for m = 3).
struct AbelianMode {
  std::vector<double> k;
  double epsilon = 0.1;
  std::vector<double> v;
};

/// Throws ValidationError unless k.v = 0 and both vectors have length n.
ConnectionField abelian_mode(const Grid& grid, int m, const AbelianMode& mode);

/// Exact amplitude factor exp(-|k|^2_h t) of a mode under the discrete flow,
/// |k|^2_h = sum_i (sin(k_i h) / h)^2.
double discrete_wavenumber_sq(const Grid& grid, const std::vector<double>& k);

/// Closed-form energy of an abelian mode, 1/2 epsilon^2 (|s|^2 |v|^2 - (s.v)^2) L^n inner(T, T) / 2 * 2
/// with s_i = sin(k_i h) / h, valid for lattice wavevectors k. The mode is an
/// exact eigenvector of the flow (rate |k|^2_h) only when s.v = 0 as well,
/// which holds for axis-aligned k and for k along a diagonal with v across it.
double abelian_mode_energy(const Grid& grid, int m, const AbelianMode& mode);

/// 't Hooft / BPST su(2) instanton in regular gauge, n = 4, m = 3:
/// Gamma_mu = sum_a 2 eta_{a mu nu} y_nu / (|y|^2 + rho^2) e_a with y the
/// torus displacement from `center`, multiplied by a smooth cutoff that is 1
/// on B_{support/2} and 0 outside B_support.
ConnectionField instanton(const Grid& grid, double rho, const Point& center, double support);

/// Abelian vortex: Gamma_j = amplitude * b(|y| / radius) * (J y)_j T, with
/// J the rotation in the (0, 1) plane and b a smooth bump supported in [0, 1).
ConnectionField abelian_vortex(const Grid& grid, int m, const Point& center, double radius,
                               double amplitude);

/// Smooth random connection: a few random low Fourier modes per component,
/// scaled so the largest coefficient is about `amplitude`.
ConnectionField random_connection(const Grid& grid, int m, double amplitude, std::uint64_t seed,
                                  int modes = 4);

/// Same element at every site for each direction.
ConnectionField constant_connection(const Grid& grid, const std::vector<AlgElem>& per_direction);

/// Site-wise translation by `shift` sites along `axis` (periodic).
ConnectionField translate(const ConnectionField& c, int axis, int shift);

}  // namespace ymflow
