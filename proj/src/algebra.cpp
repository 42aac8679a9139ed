#include "ymflow/algebra.hpp"

#include <cmath>
#include <string>

#include "ymflow/errors.hpp"

namespace ymflow {

namespace {

void require_same_size(int a, int b, const char* op) {
  if (a != b) {
    throw DimensionError(std::string(op) + ": size mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

void require_supported(int m) {
  if (m < kMinAlgebraSize || m > kMaxAlgebraSize) {
    throw DimensionError("algebra size m = " + std::to_string(m) + " outside [" +
                         std::to_string(kMinAlgebraSize) + ", " +
                         std::to_string(kMaxAlgebraSize) + "]");
  }
}

}  // namespace

// ---- Matrix ---------------------------------------------------------------

Matrix Matrix::identity(int m) {
  Matrix r(m);
  for (int i = 0; i < m; ++i) r(i, i) = 1.0;
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

double Matrix::max_abs() const {
  double v = 0.0;
  for (double x : a_) v = std::max(v, std::abs(x));
  return v;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
  require_same_size(x.size(), y.size(), "matrix product");
  const int m = x.size();
  Matrix r(m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      const double xik = x(i, k);
      for (int j = 0; j < m; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

Matrix operator+(const Matrix& x, const Matrix& y) {
  require_same_size(x.size(), y.size(), "matrix sum");
  Matrix r = x;
  auto rd = r.data();
  auto yd = y.data();
  for (std::size_t i = 0; i < rd.size(); ++i) rd[i] += yd[i];
  return r;
}

Matrix operator-(const Matrix& x, const Matrix& y) {
  require_same_size(x.size(), y.size(), "matrix difference");
  Matrix r = x;
  auto rd = r.data();
  auto yd = y.data();
  for (std::size_t i = 0; i < rd.size(); ++i) rd[i] -= yd[i];
  return r;
}

Matrix operator*(double s, const Matrix& x) {
  Matrix r = x;
  for (double& v : r.data()) v *= s;
  return r;
}

double determinant(const Matrix& mat) {
  // Gaussian elimination with partial pivoting on a copy.
  const int m = mat.size();
  Matrix a = mat;
  double det = 1.0;
  for (int c = 0; c < m; ++c) {
    int piv = c;
    for (int r = c + 1; r < m; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < m; ++j) std::swap(a(c, j), a(piv, j));
      det = -det;
    }
    det *= a(c, c);
    for (int r = c + 1; r < m; ++r) {
      const double f = a(r, c) / a(c, c);
      for (int j = c; j < m; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

// ---- AlgElem --------------------------------------------------------------

AlgElem::AlgElem(int m) : mat_(m) { require_supported(m); }

AlgElem AlgElem::from_matrix(const Matrix& mat, double tol) {
  require_supported(mat.size());
  AlgElem r{Matrix(mat)};
  const double defect = r.antisymmetry_defect();
  if (defect > tol) {
    throw ValidationError("matrix is not antisymmetric (defect " + std::to_string(defect) + ")");
  }
  return r;
}

AlgElem AlgElem::from_packed(int m, std::span<const double> packed) {
  require_supported(m);
  if (static_cast<int>(packed.size()) != algebra_dim(m)) {
    throw DimensionError("packed so(m) element has wrong component count");
  }
  Matrix mat(m);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const double v = packed[packed_index(m, a, b)];
      mat(a, b) = v;
      mat(b, a) = -v;
    }
  return AlgElem{std::move(mat)};
}

AlgElem AlgElem::generator(int m, int a, int b) {
  require_supported(m);
  if (a == b || a < 0 || b < 0 || a >= m || b >= m) {
    throw DimensionError("generator indices out of range");
  }
  Matrix mat(m);
  mat(b, a) = 1.0;
  mat(a, b) = -1.0;
  return AlgElem{std::move(mat)};
}

void AlgElem::pack(std::span<double> out) const {
  const int m = size();
  if (static_cast<int>(out.size()) != algebra_dim(m)) {
    throw DimensionError("packed output has wrong component count");
  }
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) out[packed_index(m, a, b)] = mat_(a, b);
}

std::vector<double> AlgElem::packed() const {
  std::vector<double> out(algebra_dim(size()));
  pack(out);
  return out;
}

double AlgElem::antisymmetry_defect() const {
  double d = 0.0;
  const int m = size();
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) d = std::max(d, std::abs(mat_(a, b) + mat_(b, a)));
  return d;
}

AlgElem operator+(const AlgElem& x, const AlgElem& y) {
  require_same_size(x.size(), y.size(), "algebra sum");
  return AlgElem{x.mat_ + y.mat_};
}

AlgElem operator-(const AlgElem& x, const AlgElem& y) {
  require_same_size(x.size(), y.size(), "algebra difference");
  return AlgElem{x.mat_ - y.mat_};
}

AlgElem operator*(double s, const AlgElem& x) { return AlgElem{s * x.mat_}; }

AlgElem so3_basis(int k) {
  // e1 = E32 - E23, e2 = E13 - E31, e3 = E21 - E12 (1-based).
  switch (k) {
    case 0: return AlgElem::generator(3, 1, 2);
    case 1: return AlgElem::generator(3, 2, 0);
    case 2: return AlgElem::generator(3, 0, 1);
    default: throw DimensionError("so(3) basis index out of range");
  }
}

AlgElem bracket(const AlgElem& a, const AlgElem& b) {
  require_same_size(a.size(), b.size(), "bracket");
  const int m = a.size();
  Matrix c(m);
  // Upper triangle only; the lower triangle is its exact negative.
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += a(i, k) * b(k, j) - b(i, k) * a(k, j);
      c(i, j) = s;
      c(j, i) = -s;
    }
  return AlgElem::from_matrix(c, 0.0);
}

double inner(const AlgElem& a, const AlgElem& b) {
  require_same_size(a.size(), b.size(), "inner");
  const auto x = a.matrix().data();
  const auto y = b.matrix().data();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

GroupElem expm(const AlgElem& a) {
  const int m = a.size();
  const Matrix& A = a.matrix();
  if (m == 3) {
    // Rodrigues: exp(A) = I + sin(th)/th A + (1 - cos th)/th^2 A^2.
    const double w0 = A(2, 1), w1 = A(0, 2), w2 = A(1, 0);
    const double th2 = w0 * w0 + w1 * w1 + w2 * w2;
    const double th = std::sqrt(th2);
    double s1, s2;
    if (th < 1e-4) {
      s1 = 1.0 - th2 / 6.0 + th2 * th2 / 120.0;
      s2 = 0.5 - th2 / 24.0 + th2 * th2 / 720.0;
    } else {
      s1 = std::sin(th) / th;
      s2 = (1.0 - std::cos(th)) / th2;
    }
    const Matrix A2 = A * A;
    return GroupElem::from_matrix(Matrix::identity(3) + s1 * A + s2 * A2, 1e-12);
  }
  // Scaling and squaring with a 13-term Taylor series.
  double norm1 = 0.0;
  for (int c = 0; c < m; ++c) {
    double col = 0.0;
    for (int r = 0; r < m; ++r) col += std::abs(A(r, c));
    norm1 = std::max(norm1, col);
  }
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const Matrix B = std::ldexp(1.0, -squarings) * A;
  Matrix result = Matrix::identity(m);
  Matrix term = Matrix::identity(m);
  for (int k = 1; k <= 13; ++k) {
    term = (1.0 / k) * (term * B);
    result = result + term;
    if (term.max_abs() < 1e-14 * 1e-3) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return GroupElem::from_matrix(result, 1e-12);
}

AlgElem adjoint(const GroupElem& g, const AlgElem& a) {
  require_same_size(g.size(), a.size(), "adjoint");
  const Matrix r = g.matrix() * a.matrix() * g.matrix().transpose();
  return AlgElem::from_matrix(r, 1e-12 * std::max(1.0, a.matrix().max_abs()));
}

// ---- GroupElem ------------------------------------------------------------

GroupElem GroupElem::identity(int m) {
  require_supported(m);
  return GroupElem{Matrix::identity(m)};
}

GroupElem GroupElem::from_matrix(const Matrix& mat, double tol) {
  require_supported(mat.size());
  GroupElem g{Matrix(mat)};
  const double orth = g.orthogonality_defect();
  const double det = g.determinant();
  if (orth > tol || std::abs(det - 1.0) > tol) {
    throw ValidationError("matrix is not in SO(m) (orthogonality defect " +
                          std::to_string(orth) + ", det " + std::to_string(det) + ")");
  }
  return g;
}

double GroupElem::orthogonality_defect() const {
  const Matrix p = mat_.transpose() * mat_;
  double d = 0.0;
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j) d = std::max(d, std::abs(p(i, j) - (i == j ? 1.0 : 0.0)));
  return d;
}

double GroupElem::determinant() const { return ymflow::determinant(mat_); }

GroupElem GroupElem::inverse() const { return GroupElem{mat_.transpose()}; }

GroupElem operator*(const GroupElem& x, const GroupElem& y) {
  return GroupElem{x.mat_ * y.mat_};
}

}  // namespace ymflow
