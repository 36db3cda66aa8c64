#ifndef RICCICAP_GRID_HPP
#define RICCICAP_GRID_HPP

#include <vector>

#include "riccicap/errors.hpp"

namespace riccicap {

using Field = std::vector<double>;

// Uniform node grid for the computational radial coordinate x in [0,1],
// nodes x_i = i/n_cells, i = 0..n_cells. The grid never moves; the metric
// components evolve on it.
struct RadialGrid {
  int n_cells = 0;

  RadialGrid() = default;
  explicit RadialGrid(int n) : n_cells(n) {
    if (n < 16) throw InvalidInput("RadialGrid: n_cells must be >= 16, got " + std::to_string(n));
  }

  int n_nodes() const { return n_cells + 1; }
  double dx() const { return 1.0 / n_cells; }
  double x(int i) const { return static_cast<double>(i) / n_cells; }

  bool operator==(const RadialGrid&) const = default;
};

}  // namespace riccicap

#endif
