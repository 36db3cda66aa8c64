#ifndef RICCICAP_STENCILS_HPP
#define RICCICAP_STENCILS_HPP

#include "riccicap/metric.hpp"

namespace riccicap {

// Parity accessors for the smooth-center extension: phi extends oddly and rho
// evenly across x = 0. Indices > n read the attached ghost (if valid).
double phi_ext(const WarpedMetric& m, int i);
double rho_ext(const WarpedMetric& m, int i);

// d(field)/ds = (1/rho) d(field)/dx, centered 2nd-order at interior nodes,
// one-sided 2nd-order at both ends. The workhorse for every boundary formula.
Field arclength_derivative(const WarpedMetric& m, const Field& field);

// One-sided 2nd-order value of d(field)/ds at the boundary node x = 1.
double arclength_derivative_at_boundary(const WarpedMetric& m, const Field& field);
// Degraded 1st-order variant (test hook for the convergence-order fitter).
double arclength_derivative_at_boundary_first_order(const WarpedMetric& m, const Field& field);

namespace stencil {
// First derivative in x on a uniform grid, f given at offsets relative to i.
inline double centered2(double fm1, double fp1, double dx) { return (fp1 - fm1) / (2.0 * dx); }
inline double centered4(double fm2, double fm1, double fp1, double fp2, double dx) {
  return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * dx);
}
inline double centered6(double fm3, double fm2, double fm1, double fp1, double fp2, double fp3,
                        double dx) {
  return (-fm3 + 9.0 * fm2 - 45.0 * fm1 + 45.0 * fp1 - 9.0 * fp2 + fp3) / (60.0 * dx);
}
// One-sided 2nd-order first derivative, increasing index toward the interior.
inline double onesided2_right(double f0, double fm1, double fm2, double dx) {
  return (3.0 * f0 - 4.0 * fm1 + fm2) / (2.0 * dx);
}
inline double onesided2_left(double f0, double fp1, double fp2, double dx) {
  return (-3.0 * f0 + 4.0 * fp1 - fp2) / (2.0 * dx);
}
// Second derivative.
inline double second_centered(double fm1, double f0, double fp1, double dx) {
  return (fm1 - 2.0 * f0 + fp1) / (dx * dx);
}
inline double second_onesided_right(double f0, double fm1, double fm2, double fm3, double dx) {
  return (2.0 * f0 - 5.0 * fm1 + 4.0 * fm2 - fm3) / (dx * dx);
}
// Quadratic extrapolation one cell past f0 (f0 outermost of three).
inline double extrapolate3(double f0, double fm1, double fm2) {
  return 3.0 * f0 - 3.0 * fm1 + fm2;
}
}  // namespace stencil

}  // namespace riccicap

#endif
