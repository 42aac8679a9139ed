#include "ymflow/lattice.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "ymflow/errors.hpp"
#include "ymflow/parallel.hpp"

namespace ymflow {

static_assert(std::endian::native == std::endian::little,
              "YMF1 I/O assumes a little-endian host");

Grid::Grid(int n, int N, double L) : n_(n), N_(N), L_(L) {
  if (n < 2) throw ValidationError("grid dimension n must be >= 2");
  if (N < 8) throw ValidationError("grid points per axis N must be >= 8");
  if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("grid period L must be positive");
  strides_.assign(n, 1);
  for (int a = n - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * static_cast<std::size_t>(N);
  sites_ = strides_[0] * static_cast<std::size_t>(N);
}

double Grid::cell_volume() const { return std::pow(h(), n_); }

void Grid::coords(std::size_t site, std::span<int> out) const {
  for (int a = n_ - 1; a >= 0; --a) {
    out[a] = static_cast<int>(site % N_);
    site /= N_;
  }
}

std::size_t Grid::site_of(std::span<const int> idx) const {
  std::size_t s = 0;
  for (int a = 0; a < n_; ++a) {
    int i = idx[a] % N_;
    if (i < 0) i += N_;
    s += static_cast<std::size_t>(i) * strides_[a];
  }
  return s;
}

std::size_t Grid::neighbor(std::size_t site, int axis, int delta) const {
  const std::size_t st = strides_[axis];
  const int i = static_cast<int>((site / st) % N_);
  int j = (i + delta) % N_;
  if (j < 0) j += N_;
  return site + (static_cast<std::ptrdiff_t>(j) - i) * static_cast<std::ptrdiff_t>(st);
}

Point Grid::position(std::size_t site) const {
  std::vector<int> idx(n_);
  coords(site, idx);
  Point x(n_);
  for (int a = 0; a < n_; ++a) x[a] = idx[a] * h();
  return x;
}

Field::Field(const Grid& grid, int components, double fill)
    : grid_(grid), comps_(components), data_(grid.sites() * components, fill) {
  if (components < 1) throw DimensionError("field needs at least one component");
}

Field::Field(const Grid& grid, int components, std::vector<double> data)
    : grid_(grid), comps_(components), data_(std::move(data)) {
  if (components < 1) throw DimensionError("field needs at least one component");
  if (data_.size() != grid.sites() * components) {
    throw DimensionError("field data size does not match grid and component count");
  }
}

double Field::max_abs() const {
  double v = 0.0;
  for (double x : data_) v = std::max(v, std::abs(x));
  return v;
}

Field central_diff(const Field& f, int dir) {
  const Grid& g = f.grid();
  if (dir < 0 || dir >= g.n()) throw DimensionError("central_diff: axis out of range");
  const int c = f.components();
  const double inv2h = 1.0 / (2.0 * g.h());
  Field out(g, c);
  parallel_for(0, g.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) {
      const double* p = f.at(g.neighbor(s, dir, 1));
      const double* m = f.at(g.neighbor(s, dir, -1));
      double* o = out.at(s);
      for (int q = 0; q < c; ++q) o[q] = (p[q] - m[q]) * inv2h;
    }
  });
  return out;
}

std::vector<double> interp(const Field& f, std::span<const double> x) {
  const Grid& g = f.grid();
  const int n = g.n();
  if (static_cast<int>(x.size()) != n) throw DimensionError("interp: point dimension mismatch");
  const int c = f.components();
  std::vector<int> base(n);
  std::vector<double> frac(n);
  for (int a = 0; a < n; ++a) {
    double u = x[a] / g.h();
    const double r = std::round(u);
    if (std::abs(u - r) < 1e-9) u = r;
    const double fl = std::floor(u);
    base[a] = static_cast<int>(std::fmod(fl, g.N()));
    if (base[a] < 0) base[a] += g.N();
    frac[a] = u - fl;
  }
  std::vector<double> out(c, 0.0);
  std::vector<int> idx(n);
  for (int corner = 0; corner < (1 << n); ++corner) {
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      const bool up = (corner >> a) & 1;
      w *= up ? frac[a] : 1.0 - frac[a];
      idx[a] = base[a] + (up ? 1 : 0);
    }
    if (w == 0.0) continue;
    const double* v = f.at(g.site_of(idx));
    for (int q = 0; q < c; ++q) out[q] += w * v[q];
  }
  return out;
}

double integrate_values(const Grid& grid, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw NumericError("integrate: non-finite value", i);
  }
  return pairwise_sum(values) * grid.cell_volume();
}

double integrate(const ScalarField& f) {
  if (f.components() != 1) throw DimensionError("integrate expects a scalar field");
  return integrate_values(f.grid(), f.data());
}

double wrap_displacement(double d, double L) {
  d -= L * std::round(d / L);
  if (d <= -0.5 * L) d += L;
  if (d > 0.5 * L) d -= L;
  return d;
}

Point min_image(const Grid& grid, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || static_cast<int>(x.size()) != grid.n()) {
    throw DimensionError("min_image: point dimension mismatch");
  }
  Point d(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) d[a] = wrap_displacement(x[a] - y[a], grid.L());
  return d;
}

double torus_distance(const Grid& grid, std::span<const double> x, std::span<const double> y) {
  const Point d = min_image(grid, x, y);
  double s = 0.0;
  for (double v : d) s += v * v;
  return std::sqrt(s);
}

namespace {

void put_i64(std::ostream& os, std::int64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::int64_t get_i64(std::istream& is) {
  std::int64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw ValidationError("YMF1: truncated header");
  return v;
}

}  // namespace

void write_ymf1(std::ostream& os, const Field& f, int m) {
  os.write("YMF1", 4);
  put_i64(os, f.grid().n());
  put_i64(os, f.grid().N());
  put_i64(os, m);
  put_i64(os, f.components());
  const auto d = f.data();
  os.write(reinterpret_cast<const char*>(d.data()),
           static_cast<std::streamsize>(d.size() * sizeof(double)));
  if (!os) throw ValidationError("YMF1: write failed");
}

void write_ymf1(const std::string& path, const Field& f, int m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("YMF1: cannot open " + path + " for writing");
  write_ymf1(os, f, m);
}

Field read_ymf1(std::istream& is, double L, FieldHeader* header) {
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "YMF1", 4) != 0) throw ValidationError("YMF1: bad magic");
  FieldHeader h;
  h.n = get_i64(is);
  h.N = get_i64(is);
  h.m = get_i64(is);
  h.components = get_i64(is);
  if (h.n < 2 || h.n > 16 || h.N < 8 || h.components < 1) {
    throw ValidationError("YMF1: implausible header");
  }
  const Grid grid(static_cast<int>(h.n), static_cast<int>(h.N), L);
  std::vector<double> data(grid.sites() * static_cast<std::size_t>(h.components));
  is.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!is) throw ValidationError("YMF1: truncated payload");
  if (header) *header = h;
  return Field(grid, static_cast<int>(h.components), std::move(data));
}

Field read_ymf1(const std::string& path, double L, FieldHeader* header) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("YMF1: cannot open " + path);
  return read_ymf1(is, L, header);
}

}  // namespace ymflow
