#pragma once

/// @file blowup.hpp
/// @brief Parabolic rescaling of connections and of atom measures, the
/// scaling-law checks, and tangent-measure approximants.

#include <string>
#include <vector>

#include "ymflow/entropy.hpp"
#include "ymflow/source.hpp"
#include "ymflow/spacetime.hpp"

namespace ymflow {

/// Gamma'(x, t) = lambda Gamma(lambda x + x0, lambda^2 t + t0), sampled on a
/// target grid. The default target is (n, N, L / lambda), whose sites map onto
/// base sites when x0 is a site. The view keeps a reference to `base`.
class RescaledConnectionView : public ConnectionSource {
 public:
  RescaledConnectionView(const ConnectionSource& base, SpacetimePoint z0, double lambda);
  RescaledConnectionView(const ConnectionSource& base, SpacetimePoint z0, double lambda, const Grid& target);

  const Grid& grid() const override { return target_; }
  int m() const override { return base_->m(); }
  double t_min() const override { return (base_->t_min() - z0_.t) / (lambda_ * lambda_); }
  double t_max() const override { return (base_->t_max() - z0_.t) / (lambda_ * lambda_); }
  /// materialize(grid(), t).
  ConnectionField connection(double t) const override;
  /// Samples the view on any grid: multilinear interpolation in space, linear
  /// in time. RangeError when the base time falls outside the store.
  ConnectionField materialize(const Grid& g, double t) const;

  double lambda() const { return lambda_; }
  const SpacetimePoint& center() const { return z0_; }
  const ConnectionSource& base() const { return *base_; }
  Point base_point(const Point& x) const;
  double base_time(double t) const { return lambda_ * lambda_ * t + z0_.t; }

 private:
  const ConnectionSource* base_;
  SpacetimePoint z0_;
  double lambda_;
  Grid target_;
};

/// Throws ValidationError unless lambda > 0.
RescaledConnectionView rescale_connection(const ConnectionSource& base, const SpacetimePoint& z0, double lambda);

struct ScalingDeviation {
  double max_deviation = 0.0;  ///< largest |F' - lambda^2 F| over components and samples
  double max_reference = 0.0;  ///< largest |lambda^2 F| seen, for scale
};

/// Compares the curvature of the materialized view with lambda^2 times the
/// base curvature at the mapped points. Samples are in view coordinates.
ScalingDeviation curvature_scaling_check(const RescaledConnectionView& view,
                                         const std::vector<SpacetimePoint>& samples);

struct EntropyScaling {
  double phi_base = 0.0, phi_rescaled = 0.0;
  double psi_base = 0.0, psi_rescaled = 0.0;
  double phi_relative = 0.0, psi_relative = 0.0;  ///< |base - rescaled| / max(|base|, tiny)
};

/// Phi(R; base) against Phi(1; view with lambda = R) and the same for Psi,
/// with phi = 1 on both sides. Needs R <= L/32.
EntropyScaling entropy_scaling_check(const ConnectionSource& base, const SpacetimePoint& z0, double R,
                                     const SlabOptions& opt = {});

/// Atom (x, t, w) -> ((x - x0) / lambda, (t - t0) / lambda^2, lambda^{2-n} w).
/// layer_dt and period are rescaled with the atoms.
SpacetimeMeasure parabolic_dilate(const SpacetimeMeasure& m, const SpacetimePoint& z0, double lambda);
/// Atom (x, t, w) -> ((x - x0) / lambda, t, lambda^{4-n} w).
SpacetimeMeasure euclidean_dilate(const SpacetimeMeasure& m, const Point& x0, double lambda);

/// |Theta(P(mu), z, r) - Theta(mu, z', lambda r)| where P is the parabolic
/// dilation about z0 by lambda and z' = (x0 + lambda x, t0 + lambda^2 t) is
/// the point z maps back to. Both sides use theta_slice.
double theta_dilation_check(const SpacetimeMeasure& m, const SpacetimePoint& z0, double lambda,
                            const SpacetimePoint& z, double r);

/// Portion of spacetime turned into atoms: sites in the cube of half-width
/// `radius` about the centre (radius <= 0 means every site), time layers of equal length over
/// [t_begin, t_end] with atoms at the layer midpoints.
struct MeasureWindow {
  Point center;
  double radius = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;
  int layers = 16;
};

/// Atoms w = 1/2 |F|^2 h^n layer_dt; sites with zero density are skipped.
SpacetimeMeasure measure_from_source(const DensitySource& src, const MeasureWindow& w);

/// A curvature density given in closed form.
class AnalyticDensity {
 public:
  virtual ~AnalyticDensity() = default;
  virtual int n() const = 0;
  /// Spatial period for distances (0 for R^n).
  virtual double period() const { return 0.0; }
  /// |F|^2 at (x, t).
  virtual double value(const Point& x, double t) const = 0;
};

/// amplitude (T - t)^{-2} f(|x - center| / sqrt(T - t)) with
/// f(s) = (1 - s^2)^4 for s < 1 and 0 otherwise. Zero for t >= T. The
/// exponent -2 makes the measure 1/2 |F|^2 dV dt invariant under every
/// parabolic dilation about (center, T).
class SelfSimilarDensity : public AnalyticDensity {
 public:
  SelfSimilarDensity(Point center, double T, double amplitude = 1.0, double period = 0.0);
  int n() const override { return static_cast<int>(center_.size()); }
  double period() const override { return period_; }
  double value(const Point& x, double t) const override;
  const Point& center() const { return center_; }
  double blowup_time() const { return T_; }

 private:
  Point center_;
  double T_, amplitude_, period_;
};

/// The analytic density sampled on a grid over [t_min, t_max].
class SampledDensity : public DensitySource {
 public:
  SampledDensity(const AnalyticDensity& f, const Grid& grid, double t_min, double t_max);
  const Grid& grid() const override { return grid_; }
  double t_min() const override { return t0_; }
  double t_max() const override { return t1_; }
  ScalarField density(double t) const override;

 private:
  const AnalyticDensity* f_;
  Grid grid_;
  double t0_, t1_;
};

struct TangentOptions {
  double radius = 1.0;  ///< spatial half-width of the fixed window (dilated coordinates)
  double depth = 1.0;   ///< window covers t in [-depth, 0) in dilated coordinates
  int layers = 16;
  /// Analytic sampling only: lattice points per unit of `radius` along each axis.
  int cells = 16;
  /// The uniform bound uses r = radius * 2^{-k}, k = 0..bound_levels.
  int bound_levels = 6;
};

struct TangentSequence {
  std::vector<double> lambdas;
  std::vector<SpacetimeMeasure> measures;  ///< already dilated
  std::vector<double> masses;
  /// sup_r r^{2-n} mu(P_r(0)) of each dilated measure.
  std::vector<double> uniform_bounds;
  bool truncated = false;
  std::string notice;
};

/// For each lambda (descending), atoms of 1/2 |F|^2 dV dt on the window that
/// the parabolic dilation about z0 maps onto the fixed window, then dilated.
/// Stops at the first lambda whose window leaves the source and reports the
/// prefix with a notice.
TangentSequence tangent_measure_approx(const DensitySource& src, const SpacetimePoint& z0,
                                       const std::vector<double>& lambdas, const TangentOptions& opt = {});
/// Same, with the closed-form density sampled on a lattice scaled by lambda,
/// so an exactly self-similar density gives identical measures.
TangentSequence tangent_measure_approx(const AnalyticDensity& f, const SpacetimePoint& z0,
                                       const std::vector<double>& lambdas, const TangentOptions& opt = {});

/// sup over r = r_max 2^{-k} (k = 0..levels) of r^{2-n} mu({parabolic distance to z < r}).
double uniform_bound(const SpacetimeMeasure& m, const SpacetimePoint& z, double r_max, int levels);

/// Window for the total-variation witness: |x_i| < radius, t in [t_lo, t_hi).
struct TvWindow {
  double radius = 1.0;
  double t_lo = -1.0;
  double t_hi = 0.0;
  int cells = 8;  ///< bins per axis, space and time
};

/// sum over bins of |a(bin) - b(bin)| divided by the larger window mass
/// (0 when both are empty). Positions are taken as they are, without a centre.
double windowed_tv(const SpacetimeMeasure& a, const SpacetimeMeasure& b, const TvWindow& w);

/// An exactly self-similar atom measure on R^n about the origin: layers at
/// t = -4^{-k} for k = 0..max_layer, atoms at 2^{-k} xi for xi on the lattice
/// 2^{-q} Z^n inside the unit ball, weight amplitude f(|xi|) 4^{-k(n/2-1)} (3/4)
/// 2^{-qn}. Every coordinate and weight is exact in binary, so dilation by 2 or
/// 1/2 maps layers onto layers without rounding.
SpacetimeMeasure self_similar_atoms(int n, int max_layer, int q, double amplitude = 1.0);

}  // namespace ymflow
