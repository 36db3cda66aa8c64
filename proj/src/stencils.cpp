#include "riccicap/stencils.hpp"

#include <cmath>

namespace riccicap {

double phi_ext(const WarpedMetric& m, int i) {
  if (i < 0) return -m.phi[-i];  // odd across the center
  const int n = m.n();
  if (i <= n) return m.phi[i];
  if (i == n + 1 && m.ghosts_valid) return m.phi_ghost_right;
  throw InvalidInput("phi_ext: index " + std::to_string(i) + " out of range");
}

double rho_ext(const WarpedMetric& m, int i) {
  if (i < 0) return m.rho[-i];  // even across the center
  const int n = m.n();
  if (i <= n) return m.rho[i];
  if (i == n + 1 && m.ghosts_valid) return m.rho_ghost_right;
  throw InvalidInput("rho_ext: index " + std::to_string(i) + " out of range");
}

Field arclength_derivative(const WarpedMetric& m, const Field& field) {
  const int n = m.n();
  if (static_cast<int>(field.size()) != n + 1)
    throw InvalidInput("arclength_derivative: field size " + std::to_string(field.size()) +
                       " does not match grid with " + std::to_string(n + 1) + " nodes");
  const double dx = m.grid.dx();
  Field out(n + 1);
  out[0] = stencil::onesided2_left(field[0], field[1], field[2], dx) / m.rho[0];
  for (int i = 1; i < n; ++i)
    out[i] = stencil::centered2(field[i - 1], field[i + 1], dx) / m.rho[i];
  out[n] = stencil::onesided2_right(field[n], field[n - 1], field[n - 2], dx) / m.rho[n];
  return out;
}

double arclength_derivative_at_boundary(const WarpedMetric& m, const Field& field) {
  const int n = m.n();
  if (n + 1 < 4) throw InvalidInput("arclength_derivative_at_boundary: need at least 4 nodes");
  return stencil::onesided2_right(field[n], field[n - 1], field[n - 2], m.grid.dx()) / m.rho[n];
}

double arclength_derivative_at_boundary_first_order(const WarpedMetric& m, const Field& field) {
  const int n = m.n();
  if (n + 1 < 4) throw InvalidInput("arclength_derivative_at_boundary: need at least 4 nodes");
  return (field[n] - field[n - 1]) / m.grid.dx() / m.rho[n];
}

}  // namespace riccicap
