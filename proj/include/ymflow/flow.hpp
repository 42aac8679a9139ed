#pragma once

/// @file flow.hpp
/// @brief RK4 integration of dGamma/dt = flow_rhs(Gamma), snapshot storage,
/// and the localized energy identity audit.

#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "ymflow/cutoff.hpp"
#include "ymflow/gauge.hpp"
#include "ymflow/source.hpp"

namespace ymflow {

struct FlowState {
  ConnectionField connection;
  double t = 0.0;
  double dt = 0.0;
  long step_count = 0;
  /// Energy and sup|F| of `connection`; filled by make_state and step.
  double energy = 0.0;
  double sup_F = 0.0;
  /// Curvature of `connection`, reused as the first RK4 stage.
  std::shared_ptr<const CurvatureField> curvature;
};

FlowState make_state(ConnectionField c, double t0 = 0.0);

/// One classical RK4 step of size s.dt. Throws BlowupDetected on non-finite
/// coefficients and StabilityError if the energy grows by more than
/// 1e-10 relative.
FlowState step(const FlowState& s);

/// c_cfl h^2 / (1 + h^2 sup|F|), clipped so t + dt does not pass `next_stamp`.
double auto_dt(const FlowState& s, double c_cfl = 0.2, double next_stamp = -1.0);

struct Cadence {
  enum class Kind { Uniform, Log, EveryStep };
  Kind kind = Kind::Uniform;
  /// Uniform: spacing between stamps. Log: first positive stamp.
  double interval = 0.0;
  /// Log: number of positive stamps up to t_end.
  int count = 0;

  static Cadence uniform(double interval);
  static Cadence log(double first, int count);
  static Cadence every_step();

  /// Stamps in (0, t_end], always ending at t_end. Empty for EveryStep.
  std::vector<double> stamps(double t_end) const;
};

struct SeriesRow {
  double t, dt, energy, sup_F;
};

struct BlowupInfo {
  double t;
  std::size_t site;
};

/// Time-stamped connection snapshots with linear-in-time interpolation of
/// the coefficients. Snapshots are immutable once added.
class SnapshotStore : public ConnectionSource {
 public:
  SnapshotStore() = default;
  SnapshotStore(const SnapshotStore& other);
  SnapshotStore& operator=(const SnapshotStore& other);

  /// Stamps must be strictly increasing and the grid must match.
  void add(double t, ConnectionField c);
  void add_shared(double t, std::shared_ptr<const ConnectionField> c);

  std::size_t size() const;
  const std::vector<double>& times() const { return times_; }
  std::shared_ptr<const ConnectionField> snapshot(std::size_t k) const;

  const Grid& grid() const override;
  int m() const override;
  double t_min() const override;
  double t_max() const override;
  /// Linear interpolation of Gamma between the neighbouring stamps.
  ConnectionField connection(double t) const override;
  /// Cached at stamps; recomputed from the interpolated connection otherwise.
  ScalarField density(double t) const override;

  std::vector<SeriesRow>& series() { return series_; }
  const std::vector<SeriesRow>& series() const { return series_; }
  std::optional<BlowupInfo> blowup;
  Cadence cadence;

 private:
  std::vector<double> times_;
  std::vector<std::shared_ptr<const ConnectionField>> snaps_;
  mutable std::vector<std::shared_ptr<const ScalarField>> density_cache_;
  mutable std::mutex mutex_;
  std::vector<SeriesRow> series_;
};

struct RunOptions {
  double c_cfl = 0.2;
  /// Fixed step when > 0, otherwise auto_dt.
  double fixed_dt = 0.0;
  /// Receives "t,dt,energy,sup_F" rows, flushed at every snapshot.
  std::ostream* series_csv = nullptr;
};

/// Integrates from t = 0 to t_end, recording the initial state, the cadence
/// stamps and the final state. On BlowupDetected the store holds everything
/// up to the last finite state and `blowup` is set.
SnapshotStore run(const ConnectionField& initial, double t_end, const Cadence& cadence,
                  const RunOptions& options = {});

struct EnergyIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  int stamps_used = 0;
};

/// How the 2 phi grad(phi) factor of the cutoff term is sampled.
/// Analytic: the exact gradient at each site, with an O(h^2) product-rule
/// error against the lattice curvature. Lattice: one-sided differences of
/// phi^2 paired with the neighbouring F, which is the exact summation-by-parts
/// partner of the central difference, leaving only the time quadrature error.
enum class CutoffGradient { Lattice, Analytic };

/// Localized energy identity over [t1, t2]:
///   1/4 int (|F_t1|^2 - |F_t2|^2) phi^2
///     = int int (|rhs|^2 phi^2 + sum_j <sum_i 2 phi d_i phi F_ij, rhs_j>) dV dt,
/// right side by the trapezoid rule over the stored stamps in [t1, t2].
/// Throws InsufficientResolutionError with fewer than 8 stamps.
EnergyIdentity energy_identity_audit(const SnapshotStore& store, double t1, double t2,
                                     const Cutoff& phi,
                                     CutoffGradient rule = CutoffGradient::Lattice);

void write_series_header(std::ostream& os);
void write_series_row(std::ostream& os, const SeriesRow& row);

}  // namespace ymflow
