#pragma once

/// @file singular.hpp
/// @brief Parabolic distance, the epsilon-regularity concentration scan,
/// parabolic box counting and the stratum dimension of a density function.

#include <iosfwd>
#include <string>
#include <vector>

#include "ymflow/entropy.hpp"
#include "ymflow/source.hpp"
#include "ymflow/spacetime.hpp"

namespace ymflow {

/// max(|x - y|, sqrt|t - s|), with the nearest image when period > 0.
double parabolic_dist(const SpacetimePoint& a, const SpacetimePoint& b, double period = 0.0);

struct ScanOptions {
  /// Ascending radii; each must satisfy the entropy radius limits (phi = 1).
  std::vector<double> radii;
  /// Candidate centres are every `spatial_stride`-th site along each axis.
  int spatial_stride = 1;
  /// Candidate times. When empty they run from t_max down in steps of
  /// `time_stride` while the largest slab stays inside the source.
  std::vector<double> times;
  double time_stride = 0.0;
  /// Ball factor of the contrapositive audit.
  double delta = 0.5;
  SlabOptions slab;
};

struct FlaggedPoint {
  SpacetimePoint z;
  double min_psi = 0.0;
};

struct SingularSetEstimate {
  double epsilon0 = 0.0;
  double r_min = 0.0, r_max = 0.0;
  int spatial_stride = 1;
  double delta = 0.5;
  std::size_t centers_scanned = 0;
  /// Sorted lexicographically by (x_1, ..., x_n, t).
  std::vector<FlaggedPoint> flagged;
  /// Largest sup_{P_{delta R}(z)} |F|^2 (delta R)^4 over unflagged z and radii
  /// with Psi_z(R) < epsilon0. The ball is taken backward in time.
  double empirical_C = 0.0;
};

/// Flags z iff min over the radii of Psi_z(R) >= epsilon0, with phi = 1.
SingularSetEstimate eps_regularity_scan(const DensitySource& src, double epsilon0, const ScanOptions& opt);
/// Same scan for several thresholds, sharing the Psi evaluations.
std::vector<SingularSetEstimate> eps_regularity_sweep(const DensitySource& src, const std::vector<double>& epsilons,
                                                      const ScanOptions& opt);

/// CSV "x1,...,xn,t,min_psi", one row per flagged point, %.17g.
void write_singular_csv(std::ostream& os, const SingularSetEstimate& e);

struct BoxDimension {
  /// Least-squares slope of log N(r) against log(1/r); an upper box-dimension
  /// estimate in the parabolic metric.
  double slope = 0.0;
  double intercept = 0.0;
  /// Root mean square of the fit residuals.
  double residual = 0.0;
  std::vector<double> radii;
  std::vector<std::size_t> counts;
  /// All counts equal: the slope is reported as 0.
  bool degenerate = false;
};

/// Counts occupied boxes (side r in space, r^2 in time) per radius.
BoxDimension parabolic_box_dimension(const std::vector<SpacetimePoint>& points, const std::vector<double>& radii);
std::string box_dimension_json(const BoxDimension& b);

/// Values of a density function Theta at sample points; the origin must be
/// among them.
struct DensitySamples {
  int n = 0;
  std::vector<SpacetimePoint> points;
  std::vector<double> theta;
};

struct Stratum {
  /// dim V + 2 when U = V x R, else dim V.
  int dimension = 0;
  int v_dimension = 0;
  bool product = false;
  /// Orthonormal basis of the fitted subspace V.
  std::vector<Point> basis;
  std::size_t u_count = 0, v_count = 0;
  double theta_max = 0.0;
};

/// U = {Theta >= Theta(0) - tol}, V = U at t = 0. V is fitted by the right
/// singular vectors with singular value > tol sqrt(|V|). The product case
/// needs at least one sample with t != 0 whose position lies in V (distance
/// <= tol), and every such sample must be in U.
/// Throws InsufficientDataError with fewer than n + 2 samples and
/// ValidationError when the origin is missing or some Theta exceeds
/// Theta(0) + tol.
Stratum stratum_dim(const DensitySamples& d, double tol);

/// Points mapped by (x / lambda, t / lambda^2); values unchanged.
DensitySamples dilate_samples(const DensitySamples& d, double lambda);

/// CSV "x1,...,xn,t,theta" with a header line.
void write_density_samples_csv(std::ostream& os, const DensitySamples& d);
DensitySamples read_density_samples_csv(std::istream& is);

}  // namespace ymflow
