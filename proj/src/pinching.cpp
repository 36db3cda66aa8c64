#include "riccicap/pinching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riccicap/numerics.hpp"

namespace riccicap {

namespace {

void require_positive_scalar(const CurvatureField& curv, const char* who) {
  for (int i = 0; i < curv.n_nodes(); ++i) {
    if (!(curv.r_scalar[i] > 0.0))
      throw PinchingUndefined(std::string(who) + ": R <= 0 at node " + std::to_string(i));
  }
}

}  // namespace

NodeValue eps_pinch(const CurvatureField& curv) {
  require_positive_scalar(curv, "eps_pinch");
  NodeValue best{std::numeric_limits<double>::max(), 0};
  for (int i = 0; i < curv.n_nodes(); ++i) {
    const double v = std::min(curv.a[i], curv.b[i]) / curv.r_scalar[i];
    if (v < best.value) best = {v, i};
  }
  return best;
}

NodeValue f_ratio(const CurvatureField& curv) {
  require_positive_scalar(curv, "f_ratio");
  NodeValue best{-std::numeric_limits<double>::max(), 0};
  for (int i = 0; i < curv.n_nodes(); ++i) {
    const double r = curv.r_scalar[i];
    const double v = curv.s_norm[i] / (r * r);
    if (v > best.value) best = {v, i};
  }
  return best;
}

NodeValue f_delta(const CurvatureField& curv, double delta) {
  if (!(delta >= 0.0 && delta <= 0.5))
    throw InvalidInput("f_delta: delta must lie in [0, 0.5]");
  require_positive_scalar(curv, "f_delta");
  const double gamma = 2.0 - delta;
  NodeValue best{-std::numeric_limits<double>::max(), 0};
  for (int i = 0; i < curv.n_nodes(); ++i) {
    const double r = curv.r_scalar[i];
    const double v = curv.s_norm[i] / std::pow(r, gamma) - std::pow(r, gamma - 2.0) / 3.0;
    if (v > best.value) best = {v, i};
  }
  return best;
}

double boundary_f_normal_derivative(const EigenTriple& e, double kappa) {
  const double r = e.trace();
  if (!(r > 0.0)) throw InvalidInput("boundary_f_normal_derivative: R must be positive");
  const double tang = e.lam + e.mu;
  const double braces = e.nu * r * (3.0 * tang - 2.0 * e.nu) - 2.0 * tang * e.norm2();
  return 2.0 * kappa / (r * r * r) * braces;
}

double boundary_fdelta_normal_derivative(const EigenTriple& e, double kappa, double delta) {
  if (!(delta >= 0.0 && delta <= 0.5))
    throw InvalidInput("boundary_fdelta_normal_derivative: delta must lie in [0, 0.5]");
  const double r = e.trace();
  if (!(r > 0.0)) throw InvalidInput("boundary_fdelta_normal_derivative: R must be positive");
  const double gamma = 2.0 - delta;
  const double tang = e.lam + e.mu;
  const double term1 = e.nu * (3.0 * tang - 2.0 * e.nu) / std::pow(r, gamma);
  const double term2 = gamma * e.norm2() * tang / std::pow(r, gamma + 1.0);
  const double term3 = delta / 3.0 * std::pow(r, gamma - 3.0) * tang;
  return 2.0 * kappa * (term1 - term2 + term3);
}

double h_sign(double x, double y) {
  return (x + y + 1.0) * (3.0 * (x + y) - 2.0) - 2.0 * (x * x + y * y + 1.0) * (x + y);
}

double h_constrained_max(double eps) {
  return -eps * eps * eps + 3.0 * eps * eps - eps - 2.0;
}

double h_condition_margin(const BoundaryState& state) {
  if (!(state.b_b > 0.0))
    throw InvalidInput("h_condition_margin: tangential eigenvalue must be positive");
  return state.a_b / (2.0 * state.b_b);
}

DeltaPinchFit delta_pinch_fit(const FlowTrace& trace) {
  if (trace.records.size() < 4) throw FitWindowError("delta_pinch_fit: too few records");
  const double r0 = trace.records.front().r_max;
  const double r1 = trace.records.back().r_max;
  if (!(r0 > 0.0) || !(r1 > 0.0) || !(r1 >= 100.0 * r0))
    throw FitWindowError("delta_pinch_fit: insufficient dynamic range (R_max grew from " +
                         std::to_string(r0) + " to " + std::to_string(r1) + ", need >= 100x)");

  // round metric: S - R^2/3 identically at round-off level
  bool all_zero = true;
  for (const auto& r : trace.records) {
    if (r.pinch_gap_max > 1e-12 * r.r_max * r.r_max) {
      all_zero = false;
      break;
    }
  }
  DeltaPinchFit fit;
  if (all_zero) {
    fit.identically_zero = true;
    fit.window_from = 0;
    fit.window_to = static_cast<int>(trace.records.size()) - 1;
    return fit;
  }

  // final two decades of R_max growth
  const double r_lo = r1 / 100.0;
  int from = 0;
  while (from < static_cast<int>(trace.records.size()) && trace.records[from].r_max < r_lo)
    ++from;
  std::vector<double> xs, ys;
  for (int i = from; i < static_cast<int>(trace.records.size()); ++i) {
    const double gap = trace.records[i].pinch_gap_max;
    if (gap <= 0.0) continue;
    xs.push_back(std::log(trace.records[i].r_max));
    ys.push_back(std::log(gap));
  }
  if (xs.size() < 4) throw FitWindowError("delta_pinch_fit: too few usable points in the window");
  const LinearFit lf = linear_fit(xs, ys);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.slope_stderr = lf.slope_stderr;
  fit.window_from = from;
  fit.window_to = static_cast<int>(trace.records.size()) - 1;
  return fit;
}

std::vector<GradientConstant> gradient_ratio(const FlowTrace& trace,
                                             const std::vector<double>& thetas) {
  std::vector<GradientConstant> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    double run_rm = 0.0, run_drm = 0.0;
    double c = 0.0, c32 = 0.0;
    for (const auto& r : trace.records) {
      run_rm = std::max(run_rm, r.rm_max);
      run_drm = std::max(run_drm, r.drm_max);
      c = std::max(c, run_drm - theta * run_rm * run_rm * run_rm);
      c32 = std::max(c32, run_drm - theta * std::pow(run_rm, 1.5));
    }
    out.push_back({theta, std::max(c, 0.0), std::max(c32, 0.0)});
  }
  return out;
}

}  // namespace riccicap
