#ifndef RICCICAP_METRIC_HPP
#define RICCICAP_METRIC_HPP

#include <functional>

#include "riccicap/grid.hpp"

namespace riccicap {

// Rotationally symmetric metric on the 3-ball as a discrete warped product
//
//   g = rho(x)^2 dx^2 + phi(x)^2 g_{S^2},   x in [0,1],
//
// with arclength ds = rho dx. phi(0) = 0 closes the metric smoothly at the
// center; the boundary x = 1 is umbilic with h = kappa * g, i.e. the Robin
// condition phi_s(1) = kappa * phi(1).
//
// Ghost values one cell outside each end are derived data, filled in by
// apply_boundary_conditions (flow.hpp): parity at the origin (phi odd, rho
// even), Robin ghost for phi and quadratic extrapolation for rho at x = 1.
struct WarpedMetric {
  RadialGrid grid;
  Field rho;           // nodes 0..n, g_xx = rho^2, rho > 0
  Field phi;           // nodes 0..n, sphere radius, phi(0) = 0, phi > 0 for i >= 1
  double kappa = 0.0;  // boundary umbilicity constant, >= 0, units 1/length
  double time = 0.0;   // flow time, units length^2

  bool ghosts_valid = false;
  double phi_ghost_left = 0.0;   // value at x = -dx
  double rho_ghost_left = 0.0;
  double phi_ghost_right = 0.0;  // value at x = 1 + dx
  double rho_ghost_right = 0.0;

  int n() const { return grid.n_cells; }
};

// Builds rho = s_max (constant lapse: s = s_max * x) and phi_i = phi_of_s(s_i).
WarpedMetric from_profile(int n_cells, double s_max,
                          const std::function<double(double)>& phi_of_s, double kappa);

// Structural invariants: sizes, rho > 0, phi > 0 at i >= 1, phi(0) = 0,
// kappa >= 0, and |phi_s(0) - 1| <= origin_tol. Throws on violation.
void check_metric(const WarpedMetric& m, double origin_tol = 1e-3);

// phi_s(0) is measured with the parity stencil phi_1/(dx * rho_0); a smooth
// center forces the limit 1. Returns |phi_s(0) - 1|.
double origin_drift(const WarpedMetric& m);

// Residual of the Robin enforcement |phi_s(1) - kappa*phi(1)| with the same
// ghost-centered stencil the enforcement defines. Requires valid ghosts
// (catches stale ghosts after a step that skipped re-enforcement).
double boundary_residual(const WarpedMetric& m);

// 4*pi * integral of rho*phi^2 dx (composite trapezoid), units length^3.
double volume(const WarpedMetric& m);

// Homothety g -> c^2 g: rho -> c*rho, phi -> c*phi, kappa -> kappa/c,
// time unchanged. Curvatures of the result scale by 1/c^2.
WarpedMetric rescale(const WarpedMetric& m, double c);

struct SecondFundamentalForm {
  double h_scalar;        // phi_s(1)/phi(1), one-sided stencil (BC-independent)
  double mean_curvature;  // H = 2 * h_scalar
};
SecondFundamentalForm second_fundamental_form(const WarpedMetric& m);

// max over nodes of |a-b|/scale between two metrics on the same grid.
double max_rel_difference(const WarpedMetric& a, const WarpedMetric& b);

}  // namespace riccicap

#endif
