#pragma once

// Store corruption used by the monotonicity mutation tests.

#include <cmath>
#include <memory>
#include <stdexcept>

#include "ymflow/flow.hpp"

namespace ymflow::testing {

// Replaces the snapshot nearest `slice_time` by a time-reversed state: running
// the flow backwards amplifies every mode, modelled here by scaling the
// connection by `gain`. The neighbouring stamps must bracket only this slice,
// so Phi at that radius grows by about gain^2 / 4 while its neighbours keep
// their values.
inline SnapshotStore reverse_one_snapshot(const SnapshotStore& st, double slice_time, double gain = 100.0) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < st.size(); ++k)
    if (std::abs(st.times()[k] - slice_time) < std::abs(st.times()[best] - slice_time)) best = k;
  SnapshotStore out;
  for (std::size_t k = 0; k < st.size(); ++k) {
    if (k != best) {
      out.add_shared(st.times()[k], st.snapshot(k));
      continue;
    }
    ConnectionField c = *st.snapshot(k);
    for (double& v : c.field().data()) v *= gain;
    out.add(st.times()[k], c);
  }
  return out;
}

}  // namespace ymflow::testing
