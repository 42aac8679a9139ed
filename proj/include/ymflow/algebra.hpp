#pragma once

/// @file algebra.hpp
/// @brief so(m) and SO(m) kernels: the structure algebra of the bundle and
/// its gauge group, as dense real m x m matrices.
///
/// Conventions used everywhere in ymflow:
///   - inner(A, B) = -trace(AB) = sum_ab A_ab B_ab (no 1/2 factor)
///   - packed storage of an antisymmetric matrix keeps the strictly upper
///     triangle A_ab, a < b, in row-major order (m(m-1)/2 numbers)
///   - the so(3) basis is e1 = E32 - E23, e2 = E13 - E31, e3 = E21 - E12
///     (1-based), so that [e1, e2] = e3 cyclically.

#include <span>
#include <vector>

namespace ymflow {

/// Supported range of the algebra size m.
inline constexpr int kMinAlgebraSize = 2;
inline constexpr int kMaxAlgebraSize = 8;

/// Number of independent components of an so(m) element.
constexpr int algebra_dim(int m) { return m * (m - 1) / 2; }

/// Index of the (a, b) entry, a < b, in packed storage.
constexpr int packed_index(int m, int a, int b) {
  return a * m - a * (a + 1) / 2 + (b - a - 1);
}

/// Dense square matrix of runtime size, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int m) : m_(m), a_(static_cast<std::size_t>(m) * m, 0.0) {}

  static Matrix identity(int m);

  int size() const { return m_; }
  double& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * m_ + c]; }
  double operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * m_ + c]; }
  std::span<double> data() { return a_; }
  std::span<const double> data() const { return a_; }

  Matrix transpose() const;
  double max_abs() const;

  friend Matrix operator*(const Matrix& x, const Matrix& y);
  friend Matrix operator+(const Matrix& x, const Matrix& y);
  friend Matrix operator-(const Matrix& x, const Matrix& y);
  friend Matrix operator*(double s, const Matrix& x);

 private:
  int m_ = 0;
  std::vector<double> a_;
};

/// Element of so(m): real antisymmetric matrix.
class AlgElem {
 public:
  AlgElem() = default;
  /// Zero element of so(m).
  explicit AlgElem(int m);

  /// Validates antisymmetry to `tol` (absolute); throws ValidationError.
  static AlgElem from_matrix(const Matrix& mat, double tol = 1e-12);
  /// Builds from packed strictly-upper-triangle components.
  static AlgElem from_packed(int m, std::span<const double> packed);
  /// Basis element E_ba - E_ab (0-based, a != b).
  static AlgElem generator(int m, int a, int b);

  int size() const { return mat_.size(); }
  double operator()(int r, int c) const { return mat_(r, c); }
  const Matrix& matrix() const { return mat_; }

  void pack(std::span<double> out) const;
  std::vector<double> packed() const;

  /// Largest |A_ab + A_ba|.
  double antisymmetry_defect() const;

  friend AlgElem operator+(const AlgElem& x, const AlgElem& y);
  friend AlgElem operator-(const AlgElem& x, const AlgElem& y);
  friend AlgElem operator*(double s, const AlgElem& x);
  AlgElem operator-() const { return (-1.0) * *this; }

 private:
  explicit AlgElem(Matrix mat) : mat_(std::move(mat)) {}
  Matrix mat_;
};

/// Element of SO(m).
class GroupElem {
 public:
  GroupElem() = default;
  static GroupElem identity(int m);
  /// Validates orthogonality and det = 1 to `tol`; throws ValidationError.
  static GroupElem from_matrix(const Matrix& mat, double tol = 1e-12);

  int size() const { return mat_.size(); }
  const Matrix& matrix() const { return mat_; }
  double operator()(int r, int c) const { return mat_(r, c); }

  /// Largest entry of |g^T g - I|.
  double orthogonality_defect() const;
  double determinant() const;

  GroupElem inverse() const;
  friend GroupElem operator*(const GroupElem& x, const GroupElem& y);

 private:
  explicit GroupElem(Matrix mat) : mat_(std::move(mat)) {}
  Matrix mat_;
};

/// so(3) basis e1, e2, e3 (index 0, 1, 2).
AlgElem so3_basis(int k);

/// AB - BA.
AlgElem bracket(const AlgElem& a, const AlgElem& b);
/// -trace(AB).
double inner(const AlgElem& a, const AlgElem& b);
/// Matrix exponential. Rodrigues for m = 3, otherwise scaling and squaring
/// with a truncated Taylor series.
GroupElem expm(const AlgElem& a);
/// g A g^T.
AlgElem adjoint(const GroupElem& g, const AlgElem& a);

double determinant(const Matrix& mat);

}  // namespace ymflow
