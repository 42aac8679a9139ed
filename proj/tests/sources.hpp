#pragma once

// Closed-form sources shared by the test programs.

#include <cmath>

#include "ymflow/flow.hpp"
#include "ymflow/initial_data.hpp"
#include "ymflow/source.hpp"

namespace ymflow::testing {

// Exact lattice solution of the flow for one abelian mode, at any time.
class ModeSource : public ConnectionSource {
 public:
  ModeSource(const Grid& g, AbelianMode mode, double t_end) : g_(g), mode_(std::move(mode)), t_end_(t_end) {}
  const Grid& grid() const override { return g_; }
  int m() const override { return 3; }
  double t_min() const override { return 0.0; }
  double t_max() const override { return t_end_; }
  ConnectionField connection(double t) const override {
    require_window(t, t, "mode");
    AbelianMode m = mode_;
    m.epsilon *= std::exp(-discrete_wavenumber_sq(g_, m.k) * t);
    return abelian_mode(g_, 3, m);
  }

 private:
  Grid g_;
  AbelianMode mode_;
  double t_end_;
};

// |F|^2 = c everywhere, at every time in [0, t_end].
class ConstantDensity : public DensitySource {
 public:
  ConstantDensity(const Grid& g, double c, double t_end) : g_(g), c_(c), t_end_(t_end) {}
  const Grid& grid() const override { return g_; }
  double t_min() const override { return 0.0; }
  double t_max() const override { return t_end_; }
  ScalarField density(double t) const override {
    require_window(t, t, "constant density");
    return ScalarField(g_, 1, c_);
  }

 private:
  Grid g_;
  double c_, t_end_;
};

inline SnapshotStore static_store(const ConnectionField& c, double t_end) {
  SnapshotStore st;
  st.add(0.0, c);
  st.add(t_end, c);
  return st;
}

}  // namespace ymflow::testing
