#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bja/union_find.hpp"

namespace bja {

using BusId = int;
using LineId = int;

struct Bus {
  bool injection_metered = false;
  bool is_reference = false;
};

// A transmission line. Orientation is fixed at construction: positive flow
// runs from `from` to `to`. Susceptance is stored positive; the DC sign
// conventions live entirely in the incidence matrix.
struct Line {
  BusId from = 0;
  BusId to = 0;
  double susceptance = 1.0;  // per-unit, > 0
  bool breaker_closed = true;
  bool flow_metered = false;
};

// Immutable bus/line model. Line and bus ids are dense zero-based positions
// in the construction order; topology processing produces a new Grid with
// the same ids, so measurement vectors stay aligned across it.
class Grid {
 public:
  Grid(std::vector<Bus> buses, std::vector<Line> lines)
      : buses_(std::move(buses)), lines_(std::move(lines)) {
    if (buses_.size() < 2)
      throw std::invalid_argument("grid needs at least two buses");
    if (lines_.empty())
      throw std::invalid_argument("grid needs at least one line");
    int refs = 0;
    for (std::size_t b = 0; b < buses_.size(); ++b) {
      if (buses_[b].is_reference) {
        reference_ = static_cast<BusId>(b);
        ++refs;
      }
    }
    if (refs != 1)
      throw std::invalid_argument("grid needs exactly one reference bus, got " +
                                  std::to_string(refs));
    for (std::size_t l = 0; l < lines_.size(); ++l) {
      const Line& ln = lines_[l];
      if (ln.from < 0 || ln.to < 0 || ln.from >= n_buses() || ln.to >= n_buses())
        throw std::invalid_argument("line " + std::to_string(l) +
                                    " references a bus that does not exist");
      if (ln.from == ln.to)
        throw std::invalid_argument("line " + std::to_string(l) +
                                    " joins a bus to itself");
      if (!std::isfinite(ln.susceptance) || ln.susceptance <= 0.0)
        throw std::invalid_argument("line " + std::to_string(l) +
                                    " needs a finite positive susceptance");
    }
  }

  int n_buses() const { return static_cast<int>(buses_.size()); }
  int n_lines() const { return static_cast<int>(lines_.size()); }
  const Bus& bus(BusId b) const { return buses_.at(static_cast<std::size_t>(b)); }
  const Line& line(LineId l) const { return lines_.at(static_cast<std::size_t>(l)); }
  const std::vector<Bus>& buses() const { return buses_; }
  const std::vector<Line>& lines() const { return lines_; }
  BusId reference_bus() const { return reference_; }

  std::vector<BusId> injection_buses() const {
    std::vector<BusId> out;
    for (BusId b = 0; b < n_buses(); ++b)
      if (buses_[b].injection_metered) out.push_back(b);
    return out;
  }

  int n_flow_metered() const {
    int n = 0;
    for (const Line& l : lines_)
      if (l.flow_metered) ++n;
    return n;
  }

  // Connected components of the closed-breaker subgraph; isolated buses form
  // singleton components.
  std::vector<std::vector<BusId>> operational_components() const {
    DisjointSets ds(n_buses());
    for (const Line& l : lines_)
      if (l.breaker_closed) ds.unite(l.from, l.to);
    const std::vector<int> label = ds.component_labels();
    int n_comp = 0;
    for (int lb : label) n_comp = std::max(n_comp, lb + 1);
    std::vector<std::vector<BusId>> comps(n_comp);
    for (BusId b = 0; b < n_buses(); ++b) comps[label[b]].push_back(b);
    return comps;
  }

  bool operational_connected() const {
    return operational_components().size() == 1;
  }

 private:
  std::vector<Bus> buses_;
  std::vector<Line> lines_;
  BusId reference_ = 0;
};

// Matrix view of a grid:
//   incidence           M, one row per line: +1 at `from`, -1 at `to`
//   susceptance_diag    diagonal of B
//   flow_selector       diagonal of T, 1 where the line flow is metered
//   breaker_diag        diagonal of D, 1 where the breaker is closed
//   injection_selector  M_inj, the columns of M for injection-metered buses
// Flow vectors are kept at full line length with zeros at unmetered
// positions, so the selector matrices stay square.
struct GridMatrices {
  Eigen::SparseMatrix<double> incidence;
  Eigen::VectorXd susceptance_diag;
  Eigen::VectorXd flow_selector;
  Eigen::VectorXd breaker_diag;
  Eigen::SparseMatrix<double> injection_selector;
  std::vector<BusId> injection_buses;  // column order of injection_selector
};

namespace detail {

inline std::string describe_components(const std::vector<std::vector<BusId>>& comps) {
  std::ostringstream os;
  os << comps.size() << " components:";
  for (const auto& c : comps) {
    os << " {";
    for (std::size_t i = 0; i < c.size() && i < 8; ++i) {
      if (i) os << ",";
      os << c[i];
    }
    if (c.size() > 8) os << ",...";
    os << "}";
  }
  return os.str();
}

}  // namespace detail

inline GridMatrices build_matrices(const Grid& grid) {
  const auto comps = grid.operational_components();
  if (comps.size() != 1)
    throw std::runtime_error("operational graph is disconnected: " +
                             detail::describe_components(comps));

  const int n_e = grid.n_lines();
  const int n_v = grid.n_buses();

  GridMatrices m;
  m.incidence.resize(n_e, n_v);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * static_cast<std::size_t>(n_e));
  m.susceptance_diag.resize(n_e);
  m.flow_selector.resize(n_e);
  m.breaker_diag.resize(n_e);
  for (LineId l = 0; l < n_e; ++l) {
    const Line& ln = grid.line(l);
    trip.emplace_back(l, ln.from, 1.0);
    trip.emplace_back(l, ln.to, -1.0);
    m.susceptance_diag(l) = ln.susceptance;
    m.flow_selector(l) = ln.flow_metered ? 1.0 : 0.0;
    m.breaker_diag(l) = ln.breaker_closed ? 1.0 : 0.0;
  }
  m.incidence.setFromTriplets(trip.begin(), trip.end());

  m.injection_buses = grid.injection_buses();
  m.injection_selector.resize(n_e, static_cast<int>(m.injection_buses.size()));
  std::vector<Eigen::Triplet<double>> inj;
  for (int col = 0; col < static_cast<int>(m.injection_buses.size()); ++col) {
    const BusId b = m.injection_buses[col];
    for (LineId l = 0; l < n_e; ++l) {
      const Line& ln = grid.line(l);
      if (ln.from == b) inj.emplace_back(l, col, 1.0);
      if (ln.to == b) inj.emplace_back(l, col, -1.0);
    }
  }
  m.injection_selector.setFromTriplets(inj.begin(), inj.end());
  return m;
}

// Measurement matrix H: metered flow rows (in line order) stacked above
// injection rows (in bus order). Open lines contribute to neither block.
inline Eigen::SparseMatrix<double> measurement_matrix(const GridMatrices& m) {
  const int n_e = static_cast<int>(m.susceptance_diag.size());
  const int n_v = m.incidence.cols();

  // Recover (from, to) per line from the signed incidence entries.
  std::vector<std::pair<int, int>> endpoints(n_e);
  for (int k = 0; k < m.incidence.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m.incidence, k); it; ++it) {
      if (it.value() > 0)
        endpoints[it.row()].first = static_cast<int>(it.col());
      else
        endpoints[it.row()].second = static_cast<int>(it.col());
    }
  }
  for (LineId l = 0; l < n_e; ++l) {
    if (m.flow_selector(l) == 0.0 || m.breaker_diag(l) == 0.0) continue;
    const double b = m.susceptance_diag(l);
    trip.emplace_back(row, endpoints[l].first, b);
    trip.emplace_back(row, endpoints[l].second, -b);
    ++row;
  }
  const int n_flow_rows = row;
  for (int col = 0; col < static_cast<int>(m.injection_buses.size()); ++col) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n_v);
    for (Eigen::SparseMatrix<double>::InnerIterator it(m.injection_selector, col); it; ++it) {
      const LineId l = static_cast<LineId>(it.row());
      if (m.breaker_diag(l) == 0.0) continue;
      const double sign = it.value();
      const double b = m.susceptance_diag(l);
      acc(endpoints[l].first) += sign * b;
      acc(endpoints[l].second) -= sign * b;
    }
    for (int v = 0; v < n_v; ++v)
      if (acc(v) != 0.0) trip.emplace_back(n_flow_rows + col, v, acc(v));
  }

  Eigen::SparseMatrix<double> h(n_flow_rows + static_cast<int>(m.injection_buses.size()), n_v);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

}  // namespace bja
