#ifndef RICCICAP_CURVATURE_HPP
#define RICCICAP_CURVATURE_HPP

#include "riccicap/metric.hpp"

namespace riccicap {

// Per-node curvature of a warped product g = rho^2 dx^2 + phi^2 g_{S^2}:
//
//   k_rad = -phi_ss / phi            sectional curvature of radial planes
//   k_sph = (1 - phi_s^2) / phi^2    sectional curvature of the spheres
//   a = 2*k_rad                      radial Ricci eigenvalue (nu at x = 1)
//   b = k_rad + k_sph                spherical Ricci eigenvalue, multiplicity 2
//   r_scalar = a + 2b
//   s_norm = a^2 + 2b^2 = |Ric|^2
//
// At the origin both sectional curvatures share the limit -phi_sss(0); the
// node-0 values are set to a common quadratic extrapolation from nodes 1..3.
struct CurvatureField {
  Field k_rad, k_sph;
  Field a, b;
  Field r_scalar, s_norm;

  int n_nodes() const { return static_cast<int>(a.size()); }
};

// Throws DegenerateMetric if phi <= 0 at a node i >= 1 (neckpinch/collapse).
//
// Stencils: 4th-order centered in the interior (parity across the center),
// biased/one-sided 4th-order at the outer two nodes, so every node carries
// the same-order bias and boundary derivative extraction stays clean. The
// phi_s inside k_sph is a 0/0 limit near the regular center: it uses
// 6th-order parity stencils at nodes 1..8, and its 1/rho division there is
// interpolated from odd-offset neighbors (a pointwise rho_i would couple
// grid noise back into the flow with gain 1/dx^2).
CurvatureField curvature(const WarpedMetric& m);

// The solver's variant: identical except the boundary node is closed with
// centered stencils across the Robin ghost, which is how h = kappa*g enters
// the evolution. Requires ghosts attached.
CurvatureField curvature_flow_closure(const WarpedMetric& m);

}  // namespace riccicap

#endif
