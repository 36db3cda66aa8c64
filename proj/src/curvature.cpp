#include "riccicap/curvature.hpp"

#include <cmath>

#include "riccicap/stencils.hpp"

namespace riccicap {

namespace {

// 4th-order centered second derivative
inline double second_centered4(double fm2, double fm1, double f0, double fp1, double fp2,
                               double dx) {
  return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * dx * dx);
}
// 4th-order stencils biased one node into the interior (for node n-1)
inline double first_biased4(double fm3, double fm2, double fm1, double f0, double fp1, double dx) {
  return (-fm3 + 6.0 * fm2 - 18.0 * fm1 + 10.0 * f0 + 3.0 * fp1) / (12.0 * dx);
}
inline double second_biased4(double fm4, double fm3, double fm2, double fm1, double f0, double fp1,
                             double dx) {
  return (fm4 - 6.0 * fm3 + 14.0 * fm2 - 4.0 * fm1 - 15.0 * f0 + 10.0 * fp1) / (12.0 * dx * dx);
}
// 4th-order fully one-sided stencils (for node n, monitor closure)
inline double first_onesided4(double fm4, double fm3, double fm2, double fm1, double f0,
                              double dx) {
  return (3.0 * fm4 - 16.0 * fm3 + 36.0 * fm2 - 48.0 * fm1 + 25.0 * f0) / (12.0 * dx);
}
inline double second_onesided4(double fm5, double fm4, double fm3, double fm2, double fm1,
                               double f0, double dx) {
  return (-10.0 * fm5 + 61.0 * fm4 - 156.0 * fm3 + 214.0 * fm2 - 154.0 * fm1 + 45.0 * f0) /
         (12.0 * dx * dx);
}

// phi_x with the high-order parity stencils used inside k_sph. Near the
// center 1 - phi_s^2 and phi^2 vanish together, so the relative accuracy of
// phi_s there controls the max-node error of k_sph; 6th order at nodes 1..8
// keeps that contribution at O(dx^2) uniformly.
double phi_x_for_ksph(const WarpedMetric& m, int i, double dx) {
  const int n = m.n();
  if (i <= 8 && i + 3 <= n) {
    return stencil::centered6(phi_ext(m, i - 3), phi_ext(m, i - 2), phi_ext(m, i - 1),
                              phi_ext(m, i + 1), phi_ext(m, i + 2), phi_ext(m, i + 3), dx);
  }
  if (i + 2 <= n) {
    return stencil::centered4(phi_ext(m, i - 2), phi_ext(m, i - 1), phi_ext(m, i + 1),
                              phi_ext(m, i + 2), dx);
  }
  return first_biased4(m.phi[i - 3], m.phi[i - 2], m.phi[i - 1], m.phi[i], m.phi[i + 1], dx);
}

// rho interpolated to node i from odd-offset neighbors (no self-dependence):
// the pointwise 1/rho_i inside phi_s at nodes where phi = O(dx) otherwise
// couples grid-scale rho noise back into the flow with gain 1/dx^2.
double rho_interp_no_self(const WarpedMetric& m, int i) {
  return (-rho_ext(m, i - 3) + 9.0 * rho_ext(m, i - 1) + 9.0 * rho_ext(m, i + 1) -
          rho_ext(m, i + 3)) /
         16.0;
}

enum class BoundaryNodeClosure {
  one_sided,   // interior-only 4th order: uniform-bias monitor values
  robin_ghost  // centered across the Robin ghost: the solver's BC closure
};

CurvatureField curvature_impl(const WarpedMetric& m, BoundaryNodeClosure closure) {
  const int n = m.n();
  const double dx = m.grid.dx();
  const int nodes = n + 1;
  if (static_cast<int>(m.phi.size()) != nodes || static_cast<int>(m.rho.size()) != nodes)
    throw InvalidInput("curvature: field sizes do not match the grid");

  for (int i = 1; i <= n; ++i) {
    if (!(m.phi[i] > 0.0))
      throw DegenerateMetric("curvature: phi <= 0 at node " + std::to_string(i) +
                                 " (phi = " + std::to_string(m.phi[i]) + ")",
                             i);
    if (!(m.rho[i] > 0.0))
      throw DegenerateMetric("curvature: rho <= 0 at node " + std::to_string(i), i);
  }

  CurvatureField c;
  c.k_rad.resize(nodes);
  c.k_sph.resize(nodes);

  // nodes 1..n-2: centered 4th order (nodes 1, 2 reach across the center by
  // parity); node n-1: biased 4th order, not touching the ghost
  for (int i = 1; i < n; ++i) {
    const double rho = m.rho[i];
    const double phi = m.phi[i];
    double phi_xx, phi_x, rho_x;
    if (i + 2 <= n) {
      phi_xx = second_centered4(phi_ext(m, i - 2), phi_ext(m, i - 1), phi, phi_ext(m, i + 1),
                                phi_ext(m, i + 2), dx);
      phi_x = stencil::centered4(phi_ext(m, i - 2), phi_ext(m, i - 1), phi_ext(m, i + 1),
                                 phi_ext(m, i + 2), dx);
      rho_x = stencil::centered4(rho_ext(m, i - 2), rho_ext(m, i - 1), rho_ext(m, i + 1),
                                 rho_ext(m, i + 2), dx);
    } else {
      phi_xx = second_biased4(m.phi[i - 4], m.phi[i - 3], m.phi[i - 2], m.phi[i - 1], phi,
                              m.phi[i + 1], dx);
      phi_x = first_biased4(m.phi[i - 3], m.phi[i - 2], m.phi[i - 1], phi, m.phi[i + 1], dx);
      rho_x = first_biased4(m.rho[i - 3], m.rho[i - 2], m.rho[i - 1], rho, m.rho[i + 1], dx);
    }
    // phi_ss = phi_xx/rho^2 - phi_x rho_x / rho^3
    const double phi_ss = phi_xx / (rho * rho) - phi_x * rho_x / (rho * rho * rho);
    c.k_rad[i] = -phi_ss / phi;

    const double rho_div = (i <= 8 && i + 3 <= n) ? rho_interp_no_self(m, i) : rho;
    const double phi_s = phi_x_for_ksph(m, i, dx) / rho_div;
    c.k_sph[i] = (1.0 - phi_s * phi_s) / (phi * phi);
  }

  // boundary node
  {
    const double rho = m.rho[n];
    const double phi = m.phi[n];
    double phi_xx, phi_x, rho_x;
    if (closure == BoundaryNodeClosure::robin_ghost) {
      if (!m.ghosts_valid)
        throw InvalidInput("curvature: robin_ghost closure requires attached ghosts");
      phi_xx = stencil::second_centered(m.phi[n - 1], phi, m.phi_ghost_right, dx);
      phi_x = stencil::centered2(m.phi[n - 1], m.phi_ghost_right, dx);
      rho_x = stencil::centered2(m.rho[n - 1], m.rho_ghost_right, dx);
    } else {
      phi_xx = second_onesided4(m.phi[n - 5], m.phi[n - 4], m.phi[n - 3], m.phi[n - 2],
                                m.phi[n - 1], phi, dx);
      phi_x = first_onesided4(m.phi[n - 4], m.phi[n - 3], m.phi[n - 2], m.phi[n - 1], phi, dx);
      rho_x = first_onesided4(m.rho[n - 4], m.rho[n - 3], m.rho[n - 2], m.rho[n - 1], rho, dx);
    }
    const double phi_ss = phi_xx / (rho * rho) - phi_x * rho_x / (rho * rho * rho);
    const double phi_s = phi_x / rho;
    c.k_rad[n] = -phi_ss / phi;
    c.k_sph[n] = (1.0 - phi_s * phi_s) / (phi * phi);
  }

  // center: both sectional curvatures share the limit -phi_sss(0); set the
  // node to one common extrapolated value
  {
    const double er = stencil::extrapolate3(c.k_rad[1], c.k_rad[2], c.k_rad[3]);
    const double es = stencil::extrapolate3(c.k_sph[1], c.k_sph[2], c.k_sph[3]);
    const double k0 = 0.5 * (er + es);
    c.k_rad[0] = k0;
    c.k_sph[0] = k0;
  }

  c.a.resize(nodes);
  c.b.resize(nodes);
  c.r_scalar.resize(nodes);
  c.s_norm.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    c.a[i] = 2.0 * c.k_rad[i];
    c.b[i] = c.k_rad[i] + c.k_sph[i];
    c.r_scalar[i] = c.a[i] + 2.0 * c.b[i];
    c.s_norm[i] = c.a[i] * c.a[i] + 2.0 * c.b[i] * c.b[i];
  }
  return c;
}

}  // namespace

CurvatureField curvature(const WarpedMetric& m) {
  return curvature_impl(m, BoundaryNodeClosure::one_sided);
}

CurvatureField curvature_flow_closure(const WarpedMetric& m) {
  return curvature_impl(m, BoundaryNodeClosure::robin_ghost);
}

}  // namespace riccicap
