#include "ymflow/spacetime.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "ymflow/errors.hpp"
#include "ymflow/parallel.hpp"

namespace ymflow {

double SpacetimeMeasure::mass() const {
  std::vector<double> w(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) w[i] = atoms[i].w;
  return pairwise_sum(w);
}

void SpacetimeMeasure::add(const Point& x, double t, double w) {
  if (static_cast<int>(x.size()) != n) throw DimensionError("atom position has the wrong dimension");
  if (!std::isfinite(t) || !std::isfinite(w) || w < 0.0) {
    throw ValidationError("atom time and weight must be finite with w >= 0");
  }
  for (double v : x)
    if (!std::isfinite(v)) throw ValidationError("atom position must be finite");
  atoms.push_back({x, t, w});
}

Point displacement(const Point& x, const Point& y, double period) {
  if (x.size() != y.size()) throw DimensionError("displacement between points of different dimension");
  Point d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    d[i] = x[i] - y[i];
    if (period > 0.0) d[i] = wrap_displacement(d[i], period);
  }
  return d;
}

void write_atoms_csv(std::ostream& os, const SpacetimeMeasure& m) {
  os << fmt::format("# n={} period={:.17g} layer_dt={:.17g} origin={}\n", m.n, m.period, m.layer_dt,
                    m.origin);
  for (int i = 0; i < m.n; ++i) os << 'x' << (i + 1) << ',';
  os << "t,w\n";
  for (const Atom& a : m.atoms) {
    for (double v : a.x) os << fmt::format("{:.17g},", v);
    os << fmt::format("{:.17g},{:.17g}\n", a.t, a.w);
  }
}

SpacetimeMeasure read_atoms_csv(std::istream& is) {
  SpacetimeMeasure m;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw ValidationError("atom CSV: missing # line");
  std::istringstream meta(line.substr(2));
  std::string tok;
  bool have_n = false;
  while (meta >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "n") {
      m.n = std::stoi(val);
      have_n = true;
    } else if (key == "period") {
      m.period = std::stod(val);
    } else if (key == "layer_dt") {
      m.layer_dt = std::stod(val);
    } else if (key == "origin") {
      m.origin = line.substr(line.find("origin=") + 7);
      break;
    }
  }
  if (!have_n || m.n < 1) throw ValidationError("atom CSV: bad n");
  if (!std::getline(is, line)) throw ValidationError("atom CSV: missing header");
  int row = 2;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> v;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
    if (static_cast<int>(v.size()) != m.n + 2) {
      throw ValidationError(fmt::format("atom CSV line {}: expected {} fields", row, m.n + 2));
    }
    m.add(Point(v.begin(), v.begin() + m.n), v[m.n], v[m.n + 1]);
  }
  return m;
}

}  // namespace ymflow
