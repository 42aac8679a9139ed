#pragma once

/// @file entropy.hpp
/// @brief Gaussian-weighted curvature entropies Phi and Psi, the density
/// sequence, the soliton residual and the monotonicity / sandwich audits.
///
/// With G_{z0}(x, t) = exp(-|x - x0|^2 / (4|t - t0|)) / (4 pi |t - t0|)^{n/2}:
///   Phi(R) = R^4 / 2 int |F|^2 phi^2 G  on the slice t = t0 - R^2,
///   Psi(R) = R^2 / 2 int int |F|^2 phi^2 G  over t in [t0 - 4R^2, t0 - R^2].

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ymflow/cutoff.hpp"
#include "ymflow/source.hpp"
#include "ymflow/spacetime.hpp"

namespace ymflow {

/// Backward heat kernel centred at z0. The spatial distance is the nearest
/// image when period > 0. Throws SingularTimeError when t == t0.
double heat_kernel(const SpacetimePoint& z0, const SpacetimePoint& z, double period = 0.0);
double heat_kernel(const Grid& grid, const SpacetimePoint& z0, const SpacetimePoint& z);

/// max(1e-8, 5 h^2 sup|integrand| L^n).
double quadrature_tolerance(const Grid& grid, double integrand_sup);

struct SliceIntegral {
  double value = 0.0;
  /// Largest |integrand| over the sites.
  double sup = 0.0;
};

/// int rho phi^2 G_{z0}(., t) dV on the grid.
SliceIntegral weighted_slice(const ScalarField& rho, const SpacetimePoint& z0, double t, const Cutoff& phi);

/// Radius limits shared by all entropies: R > 0, 4R <= min(iota, L/4) and
/// 2R <= L/16 so the nearest-image Gaussian is not truncated.
void check_entropy_radius(const Grid& grid, double R, const Cutoff& phi);

struct SlabOptions {
  /// Even number of Simpson intervals across a time slab (at least 8).
  int intervals = 32;
};

/// Simpson nodes (time, weight) of the Psi slab [t0 - 4R^2, t0 - R^2], with
/// the R^2 / 2 prefactor folded into the weights. Validates like psi_entropy.
std::vector<std::pair<double, double>> psi_slab_nodes(double t0, double R, const SlabOptions& opt = {});

double phi_entropy(const DensitySource& src, const SpacetimePoint& z0, double R, const Cutoff& phi);
double psi_entropy(const DensitySource& src, const SpacetimePoint& z0, double R, const Cutoff& phi,
                   const SlabOptions& opt = {});

struct ThetaSequence {
  std::vector<double> radii;   ///< descending
  std::vector<double> values;  ///< R^2 int_{T_R} phi^2 G dmu for each radius
  double estimate = 0.0;       ///< value at the smallest radius
  /// Largest increase between consecutive radii toward R -> 0 (<= 0 means
  /// the sequence is nonincreasing).
  double trend = 0.0;
};

/// For a trajectory dmu = 1/2 |F|^2 dV dt, so each value equals Psi(R).
ThetaSequence theta_density(const DensitySource& src, const SpacetimePoint& z, const std::vector<double>& radii,
                            const Cutoff& phi, const SlabOptions& opt = {});
/// Atom measure: R^2 sum over atoms with t in [t_z - 4R^2, t_z - R^2] of G_z w
/// (phi = 1).
ThetaSequence theta_density(const SpacetimeMeasure& mu, const SpacetimePoint& z, const std::vector<double>& radii);

/// Slice density r^4 int_{slice t_z - r^2} G_z dmu of an atom measure: atoms
/// within half a layer of the slice time, divided by layer_dt.
double theta_slice(const SpacetimeMeasure& mu, const SpacetimePoint& z, double r);

/// How D*F is obtained inside soliton_residual.
enum class StaticMode {
  /// D*F = -flow_rhs of the interpolated connection.
  FromConnection,
  /// D*F = 0: the source is treated as a static Yang-Mills field, leaving
  /// only the (x - x0) / (2 (t - t0)) contraction.
  YangMills,
};

/// int_{R1}^{R2} r int_{T_r} |t - t0| |(x - x0) / (2 (t - t0)) contracted with F - D*F|^2 phi^2 G dV dt dr
/// with (y contracted with F)_j = sum_i y_i F_ij. The r integral is done
/// exactly by swapping the order of integration, which leaves a single time
/// integral over [t0 - 4 R2^2, t0 - R1^2] with a piecewise weight.
double soliton_residual(const ConnectionSource& src, const SpacetimePoint& z0, double R1, double R2,
                        const Cutoff& phi, StaticMode mode = StaticMode::FromConnection,
                        const SlabOptions& opt = {});

/// Time integrand of soliton_residual at one slice, without the r weight:
/// int |t - t0| |...|^2 phi^2 G dV.
double soliton_slice(const ConnectionField& c, const SpacetimePoint& z0, double t, const Cutoff& phi,
                     StaticMode mode);

struct Violation {
  std::size_t smaller, larger;  ///< indices into radii
  double excess;                ///< Phi(smaller) - Phi(larger)
};

struct EntropyReport {
  SpacetimePoint center;
  std::vector<double> radii;
  std::vector<double> phi_values, psi_values;
  /// Quadrature tolerance of each Phi evaluation (diagnostic).
  std::vector<double> tol_quad;
  double theta_estimate = 0.0;
  /// Soliton residual between consecutive radii.
  std::vector<double> soliton_residuals;
  /// True when the curvature support stays inside the phi = 1 region on every
  /// slice used; only then are violations asserted.
  bool supported = false;
  /// Tolerance used to flag violations (relative tolerance times max Phi).
  double tol = 0.0;
  std::vector<Violation> violations;
  std::vector<Violation> psi_violations;
  /// Unsupported case: smallest C >= 0 with
  /// Phi(R_j) <= e^{C (R_k - R_j)} Phi(R_k) + C (R_k - R_j) E(0) for all j < k.
  std::optional<double> fitted_C;
};

struct AuditOptions {
  double relative_tol = 1e-6;
  SlabOptions slab;
  bool soliton = false;  ///< also fill soliton_residuals
};

EntropyReport monotonicity_audit(const DensitySource& src, const SpacetimePoint& z0, const std::vector<double>& radii,
                                 const Cutoff& phi, const AuditOptions& opt = {});

void write_report_csv(std::ostream& os, const EntropyReport& r);
/// JSON summary: center, radii, values, theta estimate, residuals, violations.
std::string report_json(const EntropyReport& r);

struct SandwichResult {
  /// max_R Psi(R) / Phi(2R) and max_R Phi(2R) / Psi(2R).
  double psi_over_phi = 0.0;
  double phi_over_psi = 0.0;
  bool vacuous = false;
  bool within_bound = true;
  double c_max = 64.0;
};

SandwichResult phi_psi_equivalence_check(const DensitySource& src, const SpacetimePoint& z0,
                                         const std::vector<double>& radii, const Cutoff& phi,
                                         double c_max = 64.0, const SlabOptions& opt = {});

}  // namespace ymflow
