#pragma once

/// @file lattice.hpp
/// @brief Flat periodic torus [0, L)^n with N points per axis: site indexing,
/// central differences, multilinear interpolation, quadrature and the YMF1
/// binary field format.
///
/// Sites are stored row-major: axis 0 is the slowest, axis n-1 is contiguous.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ymflow {

using Point = std::vector<double>;

class Grid {
 public:
  Grid() = default;
  /// Throws ValidationError unless n >= 2, N >= 8 and L > 0.
  Grid(int n, int N, double L);

  int n() const { return n_; }
  int N() const { return N_; }
  double L() const { return L_; }
  double h() const { return L_ / N_; }
  std::size_t sites() const { return sites_; }
  /// Sites along the last axis form a contiguous row of length N.
  std::size_t rows() const { return sites_ / N_; }
  std::size_t stride(int axis) const { return strides_[axis]; }
  double cell_volume() const;

  /// Per-axis integer coordinates of a site.
  void coords(std::size_t site, std::span<int> out) const;
  /// Site index from (possibly out-of-range) integer coordinates, wrapped.
  std::size_t site_of(std::span<const int> idx) const;
  /// Neighbour at +/- `delta` sites along `axis`, wrapped.
  std::size_t neighbor(std::size_t site, int axis, int delta) const;
  Point position(std::size_t site) const;

  bool operator==(const Grid& o) const { return n_ == o.n_ && N_ == o.N_ && L_ == o.L_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  int n_ = 0;
  int N_ = 0;
  double L_ = 0.0;
  std::size_t sites_ = 0;
  std::vector<std::size_t> strides_;
};

/// Per-site field with a fixed number of real components (components innermost).
class Field {
 public:
  Field() = default;
  Field(const Grid& grid, int components, double fill = 0.0);
  Field(const Grid& grid, int components, std::vector<double> data);

  const Grid& grid() const { return grid_; }
  int components() const { return comps_; }
  std::size_t size() const { return data_.size(); }

  double* at(std::size_t site) { return data_.data() + site * comps_; }
  const double* at(std::size_t site) const { return data_.data() + site * comps_; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double max_abs() const;

 private:
  Grid grid_;
  int comps_ = 0;
  std::vector<double> data_;
};

/// One real number per site.
using ScalarField = Field;

/// (f(x + h e_dir) - f(x - h e_dir)) / 2h with periodic wrap, all components.
Field central_diff(const Field& f, int dir);

/// Multilinear interpolation at an arbitrary point (wrapped into the torus).
/// Coordinates within 1e-9 cells of a lattice plane snap onto it, so queries
/// at sites return stored values exactly.
std::vector<double> interp(const Field& f, std::span<const double> x);

/// sum_sites f * h^n, summed pairwise. Throws NumericError on non-finite input.
double integrate(const ScalarField& f);

/// Pairwise-summed integral of per-site values already laid out on the grid.
double integrate_values(const Grid& grid, std::span<const double> values);

/// Per-axis displacement x - y wrapped into (-L/2, L/2].
Point min_image(const Grid& grid, std::span<const double> x, std::span<const double> y);
double torus_distance(const Grid& grid, std::span<const double> x, std::span<const double> y);
/// Scalar version of min_image for one axis.
double wrap_displacement(double d, double L);

/// Header of a YMF1 file.
struct FieldHeader {
  std::int64_t n = 0;
  std::int64_t N = 0;
  std::int64_t m = 0;
  std::int64_t components = 0;
};

/// YMF1: magic "YMF1", then n, N, m, component count as little-endian int64,
/// then little-endian doubles in row-major site order, components innermost.
void write_ymf1(std::ostream& os, const Field& f, int m);
void write_ymf1(const std::string& path, const Field& f, int m);
/// Reads a YMF1 stream; the period L is not part of the format.
Field read_ymf1(std::istream& is, double L, FieldHeader* header = nullptr);
Field read_ymf1(const std::string& path, double L, FieldHeader* header = nullptr);

}  // namespace ymflow
