#ifndef RICCICAP_BOUNDARY_HPP
#define RICCICAP_BOUNDARY_HPP

#include <vector>

#include "riccicap/curvature.hpp"
#include "riccicap/flow.hpp"
#include "riccicap/metric.hpp"

namespace riccicap {

// Boundary-restricted curvature data at x = 1. With outward normal nu = d/ds,
// a = R_nunu and b the tangential Ricci eigenvalue (so g^{ab}R_ab = 2b).
struct BoundaryState {
  double a_b = 0, b_b = 0;        // boundary values of a, b
  double kappa = 0;
  double mean_curvature = 0;      // H = 2*kappa exactly (umbilic, dim 2)
  double a_s = 0, b_s = 0, r_s = 0;  // one-sided arclength derivatives at x = 1
};

// Residuals of the flow-emergent normal-derivative identities:
//   i1 = a_s - 2*kappa*(2b - a)     (normal-normal Ricci derivative)
//   i2 = b_s - kappa*a              (tangential Ricci derivative)
//   i3 = r_s - 4*kappa*b            (scalar curvature derivative)
// i3 = i1 + 2*i2 holds identically. Normalization divides by
// max(max(|a|,|b|), 1e-3)^{3/2} to stay comparable across the blow-up range.
struct IdentityResiduals {
  double i1 = 0, i2 = 0, i3 = 0;
  double scale = 0;
  double i1n = 0, i2n = 0, i3n = 0;
};

enum class BoundaryStencil { second_order, first_order_test_hook };

BoundaryState boundary_normal_derivatives(const WarpedMetric& m, const CurvatureField& curv,
                                          BoundaryStencil stencil = BoundaryStencil::second_order);

IdentityResiduals identity_residuals(const BoundaryState& state);

struct IdentityStudyRow {
  int n_cells = 0;
  double i1n = 0, i2n = 0, i3n = 0;
};

struct IdentityStudy {
  std::vector<IdentityStudyRow> rows;
  double order_i1 = 0, order_i2 = 0, order_i3 = 0;  // fitted convergence orders
  double t_star = 0;
};

// Runs the config's preset to t* = cfg.t_end on each grid in n_list and
// tabulates the normalized residuals with fitted orders. Any run that fails
// before t* aborts the study with diagnostics.
IdentityStudy identity_convergence_study(const FlowConfig& cfg, const std::vector<int>& n_list,
                                         BoundaryStencil stencil = BoundaryStencil::second_order);

}  // namespace riccicap

#endif
