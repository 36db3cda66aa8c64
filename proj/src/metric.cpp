#include "riccicap/metric.hpp"

#include <cmath>
#include <numbers>

#include "riccicap/stencils.hpp"

namespace riccicap {

WarpedMetric from_profile(int n_cells, double s_max,
                          const std::function<double(double)>& phi_of_s, double kappa) {
  if (!(s_max > 0.0)) throw InvalidInput("from_profile: s_max must be positive");
  WarpedMetric m;
  m.grid = RadialGrid(n_cells);
  m.rho.assign(m.grid.n_nodes(), s_max);
  m.phi.resize(m.grid.n_nodes());
  for (int i = 0; i <= n_cells; ++i) m.phi[i] = phi_of_s(s_max * m.grid.x(i));
  m.phi[0] = 0.0;  // exact smooth closing at the center
  m.kappa = kappa;
  return m;
}

double origin_drift(const WarpedMetric& m) {
  // centered parity stencil: phi_s(0) = (phi_1 - (-phi_1)) / (2 dx rho_0)
  return std::abs(m.phi[1] / (m.grid.dx() * m.rho[0]) - 1.0);
}

double boundary_residual(const WarpedMetric& m) {
  if (!m.ghosts_valid)
    throw InvalidInput("boundary_residual: ghosts not attached (apply_boundary_conditions first)");
  const int n = m.n();
  const double phi_s =
      (m.phi_ghost_right - m.phi[n - 1]) / (2.0 * m.grid.dx()) / m.rho[n];
  return std::abs(phi_s - m.kappa * m.phi[n]);
}

void check_metric(const WarpedMetric& m, double origin_tol) {
  const int nodes = m.grid.n_nodes();
  if (static_cast<int>(m.rho.size()) != nodes || static_cast<int>(m.phi.size()) != nodes)
    throw InvalidInput("check_metric: field sizes do not match the grid");
  if (m.kappa < 0.0) throw InvalidInput("check_metric: kappa must be >= 0");
  for (int i = 0; i < nodes; ++i) {
    if (!(m.rho[i] > 0.0) || !std::isfinite(m.rho[i]))
      throw DegenerateMetric("check_metric: rho <= 0 at node " + std::to_string(i), i);
  }
  if (std::abs(m.phi[0]) > 1e-12 * m.phi[nodes - 1])
    throw InvalidInput("check_metric: phi(0) must vanish at the center");
  for (int i = 1; i < nodes; ++i) {
    if (!(m.phi[i] > 0.0) || !std::isfinite(m.phi[i]))
      throw DegenerateMetric("check_metric: phi <= 0 at node " + std::to_string(i), i);
  }
  const double drift = origin_drift(m);
  if (drift > origin_tol)
    throw InvalidInput("check_metric: origin regularity |phi_s(0) - 1| = " +
                       std::to_string(drift) + " exceeds " + std::to_string(origin_tol));
}

double volume(const WarpedMetric& m) {
  const int n = m.n();
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    sum += w * m.rho[i] * m.phi[i] * m.phi[i];
  }
  return 4.0 * std::numbers::pi * sum * m.grid.dx();
}

WarpedMetric rescale(const WarpedMetric& m, double c) {
  if (!(c > 0.0)) throw InvalidInput("rescale: factor must be positive");
  WarpedMetric out = m;
  for (auto& v : out.rho) v *= c;
  for (auto& v : out.phi) v *= c;
  out.kappa = m.kappa / c;
  if (m.ghosts_valid) {
    out.phi_ghost_left = c * m.phi_ghost_left;
    out.rho_ghost_left = c * m.rho_ghost_left;
    out.phi_ghost_right = c * m.phi_ghost_right;
    out.rho_ghost_right = c * m.rho_ghost_right;
  }
  return out;
}

SecondFundamentalForm second_fundamental_form(const WarpedMetric& m) {
  const int n = m.n();
  if (!(m.phi[n] > 0.0))
    throw DegenerateMetric("second_fundamental_form: phi(1) = 0 (degenerate boundary)", n);
  const double phi_x = stencil::onesided2_right(m.phi[n], m.phi[n - 1], m.phi[n - 2], m.grid.dx());
  const double h = phi_x / m.rho[n] / m.phi[n];
  return {h, 2.0 * h};
}

double max_rel_difference(const WarpedMetric& a, const WarpedMetric& b) {
  if (a.grid != b.grid) throw InvalidInput("max_rel_difference: grid mismatch");
  double scale = 0.0, diff = 0.0;
  for (int i = 0; i < a.grid.n_nodes(); ++i) {
    scale = std::max({scale, std::abs(a.phi[i]), std::abs(a.rho[i])});
    diff = std::max({diff, std::abs(a.phi[i] - b.phi[i]), std::abs(a.rho[i] - b.rho[i])});
  }
  return scale > 0 ? diff / scale : diff;
}

}  // namespace riccicap
