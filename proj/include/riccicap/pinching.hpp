#ifndef RICCICAP_PINCHING_HPP
#define RICCICAP_PINCHING_HPP

#include <optional>
#include <vector>

#include "riccicap/boundary.hpp"
#include "riccicap/curvature.hpp"
#include "riccicap/flow.hpp"

namespace riccicap {

// Ricci eigenvalues with the boundary convention: mu <= lam tangential,
// nu normal. The rotationally symmetric reduction always has lam = mu = b,
// nu = a.
struct EigenTriple {
  double lam = 0, mu = 0, nu = 0;

  EigenTriple() = default;
  EigenTriple(double l, double m_, double n_) : lam(l), mu(m_), nu(n_) {}
  static EigenTriple from_reduction(double a, double b) { return {b, b, a}; }

  double trace() const { return lam + mu + nu; }
  double norm2() const { return lam * lam + mu * mu + nu * nu; }
};

struct NodeValue {
  double value = 0;
  int node = 0;
};

// eps* = min over nodes of min(a,b)/R; the largest eps with Ric >= eps*R*g.
// Requires R > 0 at every node.
NodeValue eps_pinch(const CurvatureField& curv);

// f = S/R^2, anisotropy ratio; 1/3 at constant curvature, < 1 with Ric > 0.
NodeValue f_ratio(const CurvatureField& curv);

// f_delta = S/R^gamma - (1/3) R^{gamma-2}, gamma = 2 - delta, delta in [0, 0.5].
NodeValue f_delta(const CurvatureField& curv, double delta);

// Boundary normal derivative of f at an umbilic boundary:
//   grad_nu f = (2 kappa / R^3) { nu R [3(lam+mu) - 2 nu] - 2 (lam+mu) S }.
double boundary_f_normal_derivative(const EigenTriple& e, double kappa);

// Same for f_delta:
//   grad_nu f = 2 kappa { nu[3(lam+mu)-2nu]/R^gamma - gamma S (lam+mu)/R^{gamma+1}
//               + (delta/3) R^{gamma-3} (lam+mu) }.
double boundary_fdelta_normal_derivative(const EigenTriple& e, double kappa, double delta);

// Sign function of the eigenvalue-ratio analysis,
//   h(x,y) = (x+y+1)[3(x+y)-2] - 2(x^2+y^2+1)(x+y),
// and its constrained-maximum profile h(eps/2, eps/2) = -eps^3+3eps^2-eps-2.
double h_sign(double x, double y);
double h_constrained_max(double eps);

// a_b/(2 b_b): the largest delta for which R_nunu >= delta * g^{ab}R_ab holds
// at this instant. Requires b_b > 0.
double h_condition_margin(const BoundaryState& state);

// Least-squares fit of log(max-node S - R^2/3) against log(R_max) over the
// final two decades of R_max growth. Requires R_max growth >= 100x. A trace
// with S - R^2/3 at round-off (round metric) short-circuits.
struct DeltaPinchFit {
  bool identically_zero = false;
  double slope = 0, intercept = 0;
  double slope_stderr = 0;
  int window_from = 0, window_to = 0;  // record index range of the fit
};
DeltaPinchFit delta_pinch_fit(const FlowTrace& trace);

// C(theta) = max over tau of [runmax |DRm| - theta * (runmax |Rm|)^3]
// clamped at 0, with |Rm|, |DRm| proxied by max |sectional| and max
// |d_s sectional|. c32 is the companion with exponent 3/2 instead of 3,
// logged for comparison only.
struct GradientConstant {
  double theta = 0;
  double c = 0;
  double c32 = 0;
};
std::vector<GradientConstant> gradient_ratio(const FlowTrace& trace,
                                             const std::vector<double>& thetas);

// Everything above, evaluated on one trace, for reporting.
struct PinchingReport {
  double eps_star = 0;
  int eps_node = 0;
  double f_max = 0;
  int f_node = 0;
  double f_delta_max = 0;
  int f_delta_node = 0;
  double delta_used = 0;
  std::optional<double> h_margin_min;
  std::optional<DeltaPinchFit> delta_fit;  // nullopt when range insufficient
  std::vector<GradientConstant> grad_constants;
};

}  // namespace riccicap

#endif
