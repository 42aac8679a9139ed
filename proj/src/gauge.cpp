#include "ymflow/gauge.hpp"

#include <cmath>
#include <string>

#include "ymflow/detail/packed.hpp"
#include "ymflow/errors.hpp"
#include "ymflow/parallel.hpp"

namespace ymflow {

namespace {

// Neighbour lookup for sites of one row (all axes fixed except the last).
struct RowStencil {
  const Grid& g;
  std::size_t base = 0;
  std::vector<std::size_t> plus, minus;  // row bases of the +/- neighbours, axes 0..n-2

  explicit RowStencil(const Grid& grid) : g(grid), plus(grid.n()), minus(grid.n()) {}

  void set_row(std::size_t row) {
    base = row * g.N();
    for (int a = 0; a + 1 < g.n(); ++a) {
      plus[a] = g.neighbor(base, a, 1);
      minus[a] = g.neighbor(base, a, -1);
    }
  }
  std::size_t up(int axis, int x) const {
    if (axis + 1 < g.n()) return plus[axis] + x;
    return base + (x + 1 == g.N() ? 0 : x + 1);
  }
  std::size_t down(int axis, int x) const {
    if (axis + 1 < g.n()) return minus[axis] + x;
    return base + (x == 0 ? g.N() - 1 : x - 1);
  }
};

void require_same_grid(const Grid& a, const Grid& b, const char* op) {
  if (a != b) throw DimensionError(std::string(op) + ": grid mismatch");
}

template <int M>
void curvature_kernel(const ConnectionField& c, CurvatureField& F) {
  const Grid& g = c.grid();
  const int n = g.n();
  const int m = c.m();
  const int d = M > 0 ? detail::Packed<M>::kDim : c.dim();
  const double inv2h = 1.0 / (2.0 * g.h());
  parallel_for(0, g.rows(), [&](std::size_t rb, std::size_t re) {
    RowStencil st(g);
    for (std::size_t r = rb; r < re; ++r) {
      st.set_row(r);
      for (int x = 0; x < g.N(); ++x) {
        const std::size_t s = st.base + x;
        for (int i = 0; i < n; ++i) {
          const std::size_t ip = st.up(i, x), im = st.down(i, x);
          for (int j = i + 1; j < n; ++j) {
            const std::size_t jp = st.up(j, x), jm = st.down(j, x);
            double* out = F.at(s, pair_index(n, i, j));
            const double* gj_ip = c.at(ip, j);
            const double* gj_im = c.at(im, j);
            const double* gi_jp = c.at(jp, i);
            const double* gi_jm = c.at(jm, i);
            for (int q = 0; q < d; ++q) {
              out[q] = ((gj_ip[q] - gj_im[q]) - (gi_jp[q] - gi_jm[q])) * inv2h;
            }
            detail::bracket_add<M>(m, 1.0, c.at(s, i), c.at(s, j), out);
          }
        }
      }
    }
  });
}

template <int M>
void rhs_kernel(const ConnectionField& c, const CurvatureField& F, ConnectionField& out) {
  const Grid& g = c.grid();
  const int n = g.n();
  const int m = c.m();
  const int d = M > 0 ? detail::Packed<M>::kDim : c.dim();
  const double inv2h = 1.0 / (2.0 * g.h());
  parallel_for(0, g.rows(), [&](std::size_t rb, std::size_t re) {
    RowStencil st(g);
    for (std::size_t r = rb; r < re; ++r) {
      st.set_row(r);
      for (int x = 0; x < g.N(); ++x) {
        const std::size_t s = st.base + x;
        for (int j = 0; j < n; ++j) {
          double* o = out.at(s, j);
          for (int q = 0; q < d; ++q) o[q] = 0.0;
        }
        for (int i = 0; i < n; ++i) {
          const std::size_t ip = st.up(i, x), im = st.down(i, x);
          for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double sign = i < j ? 1.0 : -1.0;
            const int p = i < j ? pair_index(n, i, j) : pair_index(n, j, i);
            double* o = out.at(s, j);
            const double* fp = F.at(ip, p);
            const double* fm = F.at(im, p);
            const double k = sign * inv2h;
            for (int q = 0; q < d; ++q) o[q] += k * (fp[q] - fm[q]);
            detail::bracket_add<M>(m, sign, c.at(s, i), F.at(s, p), o);
          }
        }
      }
    }
  });
}

template <int M>
void cov_deriv_kernel(const ConnectionField& c, const CurvatureField& F, int i, Field& out) {
  const Grid& g = c.grid();
  const int n = g.n();
  const int m = c.m();
  const int d = M > 0 ? detail::Packed<M>::kDim : c.dim();
  const int P = pair_count(n);
  const double inv2h = 1.0 / (2.0 * g.h());
  parallel_for(0, g.rows(), [&](std::size_t rb, std::size_t re) {
    RowStencil st(g);
    for (std::size_t r = rb; r < re; ++r) {
      st.set_row(r);
      for (int x = 0; x < g.N(); ++x) {
        const std::size_t s = st.base + x;
        const std::size_t ip = st.up(i, x), im = st.down(i, x);
        for (int p = 0; p < P; ++p) {
          double* o = out.at(s) + p * d;
          const double* fp = F.at(ip, p);
          const double* fm = F.at(im, p);
          for (int q = 0; q < d; ++q) o[q] = (fp[q] - fm[q]) * inv2h;
          detail::bracket_add<M>(m, 1.0, c.at(s, i), F.at(s, p), o);
        }
      }
    }
  });
}

}  // namespace

// ---- storage --------------------------------------------------------------

ConnectionField::ConnectionField(const Grid& grid, int m)
    : m_(m), dim_(algebra_dim(m)), data_(grid, grid.n() * algebra_dim(m)) {
  if (m < kMinAlgebraSize || m > kMaxAlgebraSize) throw DimensionError("unsupported algebra size");
}

ConnectionField::ConnectionField(int m, Field coefficients)
    : m_(m), dim_(algebra_dim(m)), data_(std::move(coefficients)) {
  if (m < kMinAlgebraSize || m > kMaxAlgebraSize) throw DimensionError("unsupported algebra size");
  if (data_.components() != data_.grid().n() * dim_) {
    throw DimensionError("connection data needs n*m(m-1)/2 components per site");
  }
  const auto v = data_.data();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k])) throw NumericError("non-finite connection coefficient", k / data_.components());
  }
}

AlgElem ConnectionField::gamma(std::size_t site, int dir) const {
  return AlgElem::from_packed(m_, std::span<const double>(at(site, dir), dim_));
}

void ConnectionField::set_gamma(std::size_t site, int dir, const AlgElem& a) {
  if (a.size() != m_) throw DimensionError("set_gamma: algebra size mismatch");
  a.pack(std::span<double>(at(site, dir), dim_));
}

CurvatureField::CurvatureField(const Grid& grid, int m)
    : m_(m), dim_(algebra_dim(m)), data_(grid, pair_count(grid.n()) * algebra_dim(m)) {}

AlgElem CurvatureField::f(std::size_t site, int i, int j) const {
  if (i == j) return AlgElem(m_);
  const int a = std::min(i, j), b = std::max(i, j);
  AlgElem e = AlgElem::from_packed(m_, std::span<const double>(at(site, pair_index(n(), a, b)), dim_));
  return i < j ? e : -e;
}

GaugeField::GaugeField(const Grid& grid, int m) : m_(m), data_(grid, m * m) {
  for (std::size_t s = 0; s < grid.sites(); ++s)
    for (int a = 0; a < m; ++a) data_.at(s)[a * m + a] = 1.0;
}

GroupElem GaugeField::g(std::size_t site) const {
  Matrix mat(m_);
  std::copy(data_.at(site), data_.at(site) + m_ * m_, mat.data().begin());
  return GroupElem::from_matrix(mat, 1e-8);
}

void GaugeField::set(std::size_t site, const GroupElem& g) {
  if (g.size() != m_) throw DimensionError("gauge field: group size mismatch");
  const auto src = g.matrix().data();
  std::copy(src.begin(), src.end(), data_.at(site));
}

// ---- operators ------------------------------------------------------------

CurvatureField curvature(const ConnectionField& c) {
  CurvatureField F(c.grid(), c.m());
  detail::dispatch_algebra(c.m(), [&](auto tag) { curvature_kernel<decltype(tag)::value>(c, F); });
  return F;
}

Field cov_deriv(const ConnectionField& c, const CurvatureField& F, int i) {
  require_same_grid(c.grid(), F.grid(), "cov_deriv");
  if (c.m() != F.m()) throw DimensionError("cov_deriv: algebra size mismatch");
  if (i < 0 || i >= c.n()) throw DimensionError("cov_deriv: axis out of range");
  Field out(c.grid(), F.field().components());
  detail::dispatch_algebra(c.m(), [&](auto tag) { cov_deriv_kernel<decltype(tag)::value>(c, F, i, out); });
  return out;
}

ConnectionField flow_rhs(const ConnectionField& c, const CurvatureField& F) {
  require_same_grid(c.grid(), F.grid(), "flow_rhs");
  ConnectionField out(c.grid(), c.m());
  detail::dispatch_algebra(c.m(), [&](auto tag) { rhs_kernel<decltype(tag)::value>(c, F, out); });
  return out;
}

ConnectionField flow_rhs(const ConnectionField& c) { return flow_rhs(c, curvature(c)); }

ScalarField curvature_density(const CurvatureField& F) {
  const Grid& g = F.grid();
  const int comps = F.field().components();
  ScalarField out(g, 1);
  parallel_for(0, g.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) {
      const double* f = F.field().at(s);
      double acc = 0.0;
      for (int q = 0; q < comps; ++q) acc += f[q] * f[q];
      // 2 for the packed inner product, 2 for the i > j half of the sum.
      out[s] = 4.0 * acc;
    }
  });
  return out;
}

double energy(const CurvatureField& F) { return 0.5 * integrate(curvature_density(F)); }

double energy(const ConnectionField& c) { return energy(curvature(c)); }

double sup_curvature(const CurvatureField& F) {
  const ScalarField rho = curvature_density(F);
  double v = 0.0;
  for (double x : rho.data()) v = std::max(v, x);
  return std::sqrt(v);
}

ConnectionField apply_gauge(const ConnectionField& c, const GaugeField& gf, double* symmetric_defect) {
  require_same_grid(c.grid(), gf.grid(), "apply_gauge");
  if (c.m() != gf.m()) throw DimensionError("apply_gauge: algebra size mismatch");
  const Grid& g = c.grid();
  const int m = c.m();
  const int n = g.n();
  // Validates orthogonality at every site (throws ValidationError).
  for (std::size_t s = 0; s < g.sites(); ++s) (void)gf.g(s);

  ConnectionField out(g, m);
  const double inv2h = 1.0 / (2.0 * g.h());
  double defect = 0.0;
  for (std::size_t s = 0; s < g.sites(); ++s) {
    Matrix G(m);
    std::copy(gf.field().at(s), gf.field().at(s) + m * m, G.data().begin());
    const Matrix Gt = G.transpose();
    for (int i = 0; i < n; ++i) {
      const double* gp = gf.field().at(g.neighbor(s, i, 1));
      const double* gm = gf.field().at(g.neighbor(s, i, -1));
      Matrix dG(m);
      for (int q = 0; q < m * m; ++q) dG.data()[q] = (gp[q] - gm[q]) * inv2h;
      const Matrix X = G * c.gamma(s, i).matrix() * Gt - dG * Gt;
      Matrix A(m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          A(a, b) = 0.5 * (X(a, b) - X(b, a));
          defect = std::max(defect, std::abs(0.5 * (X(a, b) + X(b, a))));
        }
      out.set_gamma(s, i, AlgElem::from_matrix(A, 0.0));
    }
  }
  if (symmetric_defect) *symmetric_defect = defect;
  return out;
}

double bianchi_residual(const ConnectionField& c) {
  const int n = c.n();
  if (n < 3) return 0.0;
  const CurvatureField F = curvature(c);
  std::vector<Field> D;
  D.reserve(n);
  for (int i = 0; i < n; ++i) D.push_back(cov_deriv(c, F, i));
  const int d = c.dim();
  double worst = 0.0;
  for (std::size_t s = 0; s < c.grid().sites(); ++s) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          // D_i F_jk + D_j F_ki + D_k F_ij with F_ki = -F_ik.
          const double* a = D[i].at(s) + pair_index(n, j, k) * d;
          const double* b = D[j].at(s) + pair_index(n, i, k) * d;
          const double* e = D[k].at(s) + pair_index(n, i, j) * d;
          for (int q = 0; q < d; ++q) worst = std::max(worst, std::abs(a[q] - b[q] + e[q]));
        }
  }
  return worst;
}

double l2_norm(const Field& f) {
  const Grid& g = f.grid();
  std::vector<double> v(g.sites());
  const int comps = f.components();
  for (std::size_t s = 0; s < g.sites(); ++s) {
    double acc = 0.0;
    for (int q = 0; q < comps; ++q) acc += f.at(s)[q] * f.at(s)[q];
    v[s] = 2.0 * acc;
  }
  return std::sqrt(integrate_values(g, v));
}

double l2_norm_ball(const Field& f, const Point& center, double radius) {
  const Grid& g = f.grid();
  std::vector<double> v(g.sites(), 0.0);
  const int comps = f.components();
  for (std::size_t s = 0; s < g.sites(); ++s) {
    if (torus_distance(g, g.position(s), center) >= radius) continue;
    double acc = 0.0;
    for (int q = 0; q < comps; ++q) acc += f.at(s)[q] * f.at(s)[q];
    v[s] = 2.0 * acc;
  }
  return std::sqrt(integrate_values(g, v));
}

}  // namespace ymflow
