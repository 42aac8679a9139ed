#pragma once

// Hot-loop kernels on packed so(m) elements (strict upper triangle, row-major).
// M is the compile-time algebra size; M == 0 selects the runtime-sized path.

#include <array>
#include <type_traits>
#include <utility>

#include "ymflow/algebra.hpp"
#include "ymflow/errors.hpp"

namespace ymflow::detail {

template <int M>
struct Packed {
  static constexpr int kDim = M * (M - 1) / 2;
};

inline void unpack_dense(int m, const double* p, double* out) {
  for (int a = 0; a < m; ++a) {
    out[a * m + a] = 0.0;
    for (int b = a + 1; b < m; ++b) {
      const double v = p[packed_index(m, a, b)];
      out[a * m + b] = v;
      out[b * m + a] = -v;
    }
  }
}

/// c = [a, b], all packed. c must not alias a or b.
template <int M>
inline void bracket(int m, const double* a, const double* b, double* c) {
  if constexpr (M == 3) {
    (void)m;
    // Packed (A01, A02, A12) is (-w3, w2, -w1) for the rotation vector w;
    // the bracket is the cross product of rotation vectors.
    const double a1 = -a[2], a2 = a[1], a3 = -a[0];
    const double b1 = -b[2], b2 = b[1], b3 = -b[0];
    const double c1 = a2 * b3 - a3 * b2;
    const double c2 = a3 * b1 - a1 * b3;
    const double c3 = a1 * b2 - a2 * b1;
    c[0] = -c3;
    c[1] = c2;
    c[2] = -c1;
  } else if constexpr (M == 2) {
    (void)m;
    (void)a;
    (void)b;
    c[0] = 0.0;
  } else {
    constexpr int kCap = M > 0 ? M : kMaxAlgebraSize;
    const int mm = M > 0 ? M : m;
    std::array<double, kCap * kCap> A{}, B{};
    unpack_dense(mm, a, A.data());
    unpack_dense(mm, b, B.data());
    for (int i = 0; i < mm; ++i)
      for (int j = i + 1; j < mm; ++j) {
        double s = 0.0;
        for (int k = 0; k < mm; ++k) s += A[i * mm + k] * B[k * mm + j] - B[i * mm + k] * A[k * mm + j];
        c[packed_index(mm, i, j)] = s;
      }
  }
}

/// c += s * [a, b].
template <int M>
inline void bracket_add(int m, double s, const double* a, const double* b, double* c) {
  constexpr int kCap = M > 0 ? Packed<M>::kDim : algebra_dim(kMaxAlgebraSize);
  const int d = M > 0 ? Packed<M>::kDim : algebra_dim(m);
  std::array<double, kCap> tmp{};
  bracket<M>(m, a, b, tmp.data());
  for (int q = 0; q < d; ++q) c[q] += s * tmp[q];
}

/// sum_ab A_ab B_ab = 2 * (packed dot product).
template <int M>
inline double inner(int m, const double* a, const double* b) {
  const int d = M > 0 ? Packed<M>::kDim : algebra_dim(m);
  double s = 0.0;
  for (int q = 0; q < d; ++q) s += a[q] * b[q];
  return 2.0 * s;
}

/// Calls f(std::integral_constant<int, M>) with M = m for the specialised
/// sizes and M = 0 otherwise.
template <class F>
decltype(auto) dispatch_algebra(int m, F&& f) {
  switch (m) {
    case 2: return f(std::integral_constant<int, 2>{});
    case 3: return f(std::integral_constant<int, 3>{});
    case 4: return f(std::integral_constant<int, 4>{});
    default: return f(std::integral_constant<int, 0>{});
  }
}

}  // namespace ymflow::detail
