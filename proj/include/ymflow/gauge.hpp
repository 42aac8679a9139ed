#pragma once

/// @file gauge.hpp
/// @brief Connection coefficients Gamma_i(x), curvature F_ij, covariant
/// derivatives, the flow right-hand side, energy and gauge action.
///
/// Every so(m) value is stored packed (see algebra.hpp). A ConnectionField
/// holds n packed elements per site (direction-major); a CurvatureField holds
/// one packed element per pair i < j, ordered like packed_index(n, i, j).

#include <cstddef>
#include <vector>

#include "ymflow/algebra.hpp"
#include "ymflow/lattice.hpp"

namespace ymflow {

/// Number of pairs i < j in dimension n.
constexpr int pair_count(int n) { return n * (n - 1) / 2; }
constexpr int pair_index(int n, int i, int j) { return packed_index(n, i, j); }

class ConnectionField {
 public:
  ConnectionField() = default;
  /// Zero (flat) connection.
  ConnectionField(const Grid& grid, int m);
  /// Takes packed coefficients; throws on wrong component count or
  /// non-finite entries.
  ConnectionField(int m, Field coefficients);

  const Grid& grid() const { return data_.grid(); }
  int m() const { return m_; }
  int n() const { return data_.grid().n(); }
  /// Packed components per algebra element.
  int dim() const { return dim_; }

  double* at(std::size_t site, int dir) { return data_.at(site) + dir * dim_; }
  const double* at(std::size_t site, int dir) const { return data_.at(site) + dir * dim_; }

  AlgElem gamma(std::size_t site, int dir) const;
  /// Stores an element; its antisymmetry is validated by AlgElem itself.
  void set_gamma(std::size_t site, int dir, const AlgElem& a);

  Field& field() { return data_; }
  const Field& field() const { return data_; }

 private:
  int m_ = 0;
  int dim_ = 0;
  Field data_;
};

class CurvatureField {
 public:
  CurvatureField() = default;
  CurvatureField(const Grid& grid, int m);

  const Grid& grid() const { return data_.grid(); }
  int m() const { return m_; }
  int n() const { return data_.grid().n(); }
  int dim() const { return dim_; }

  /// Packed F_ij for i < j.
  double* at(std::size_t site, int pair) { return data_.at(site) + pair * dim_; }
  const double* at(std::size_t site, int pair) const { return data_.at(site) + pair * dim_; }

  /// F_ij for any i != j (sign applied for i > j); zero for i == j.
  AlgElem f(std::size_t site, int i, int j) const;

  Field& field() { return data_; }
  const Field& field() const { return data_; }

 private:
  int m_ = 0;
  int dim_ = 0;
  Field data_;
};

/// Per-site SO(m) matrices, row-major m*m components.
class GaugeField {
 public:
  GaugeField() = default;
  /// Identity everywhere.
  GaugeField(const Grid& grid, int m);

  const Grid& grid() const { return data_.grid(); }
  int m() const { return m_; }
  GroupElem g(std::size_t site) const;
  void set(std::size_t site, const GroupElem& g);

  const Field& field() const { return data_; }

 private:
  int m_ = 0;
  Field data_;
};

/// F_ij = D_i Gamma_j - D_j Gamma_i + [Gamma_i, Gamma_j].
CurvatureField curvature(const ConnectionField& c);

/// D_i F_jk + [Gamma_i, F_jk] for every pair j < k; same layout as F.
Field cov_deriv(const ConnectionField& c, const CurvatureField& F, int i);

/// rhs_j = sum_i (D_i F_ij + [Gamma_i, F_ij]); the flow is dGamma/dt = rhs.
/// Layout matches ConnectionField.
ConnectionField flow_rhs(const ConnectionField& c);
ConnectionField flow_rhs(const ConnectionField& c, const CurvatureField& F);

/// |F|^2 = sum_{i<j} 2 inner(F_ij, F_ij) per site.
ScalarField curvature_density(const CurvatureField& F);

/// 1/2 integral of |F|^2.
double energy(const ConnectionField& c);
double energy(const CurvatureField& F);

/// max over sites of |F|.
double sup_curvature(const CurvatureField& F);

/// Gamma_i -> g Gamma_i g^T - (D_i g) g^T, antisymmetrized. The largest
/// symmetric part discarded by the antisymmetrization is written to
/// `symmetric_defect` when given.
ConnectionField apply_gauge(const ConnectionField& c, const GaugeField& g,
                            double* symmetric_defect = nullptr);

/// max over sites and i < j < k of |cyclic sum of D_i F_jk + [Gamma_i, F_jk]|.
double bianchi_residual(const ConnectionField& c);

/// L2 norm over the torus of a packed field, with every packed component
/// counted twice so that it equals the matrix Frobenius norm.
double l2_norm(const Field& packed_field);

/// Same, restricted to sites whose torus distance from `center` is < radius.
double l2_norm_ball(const Field& packed_field, const Point& center, double radius);

}  // namespace ymflow
