#include "riccicap/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "riccicap/boundary.hpp"
#include "riccicap/numerics.hpp"
#include "riccicap/pinching.hpp"
#include "riccicap/presets.hpp"
#include "riccicap/stencils.hpp"

namespace riccicap {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::t_end: return "t_end";
    case StopReason::blow_up: return "blow_up";
    case StopReason::degeneracy: return "degeneracy";
    case StopReason::max_steps: return "max_steps";
  }
  return "unknown";
}

WarpedMetric apply_boundary_conditions(const WarpedMetric& m) {
  const int n = m.n();
  const double dx = m.grid.dx();
  WarpedMetric out = m;
  // center: phi odd, rho even
  out.phi_ghost_left = -m.phi[1];
  out.rho_ghost_left = m.rho[1];
  // boundary: centered stencil realizes phi_s(1) = kappa*phi(1)
  out.phi_ghost_right = m.phi[n - 1] + 2.0 * dx * m.kappa * m.rho[n] * m.phi[n];
  out.rho_ghost_right = stencil::extrapolate3(m.rho[n], m.rho[n - 1], m.rho[n - 2]);
  out.ghosts_valid = true;
  return out;
}

FlowRhs ricci_rhs(const WarpedMetric& m, const CurvatureField& curv, double dissipation) {
  const int nodes = m.grid.n_nodes();
  if (curv.n_nodes() != nodes) throw InvalidInput("ricci_rhs: curvature/metric size mismatch");
  FlowRhs rhs;
  rhs.drho.resize(nodes);
  rhs.dphi.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    rhs.drho[i] = -curv.a[i] * m.rho[i];
    rhs.dphi[i] = -curv.b[i] * m.phi[i];  // phi(0) = 0 stays pinned exactly
  }
  if (dissipation > 0.0) {
    // undivided 4th difference with parity ghosts, applied on 2 <= i <= n-2:
    // the folded rows at nodes 0..1 interact with the center closure (whose
    // own Jacobian diagonal is strongly negative) and must be left alone
    const int n = m.n();
    const double dx = m.grid.dx();
    for (int i = 2; i <= n - 2; ++i) {
      const double d4 = rho_ext(m, i - 2) - 4.0 * rho_ext(m, i - 1) + 6.0 * m.rho[i] -
                        4.0 * m.rho[i + 1] + m.rho[i + 2];
      rhs.drho[i] -= dissipation * d4 / (m.rho[i] * m.rho[i] * dx * dx);
    }
  }
  return rhs;
}

double cfl_dt(const WarpedMetric& m, const CurvatureField& curv, double cfl_factor) {
  const double dx = m.grid.dx();
  double h2_min = std::numeric_limits<double>::max();
  for (double r : m.rho) h2_min = std::min(h2_min, (r * dx) * (r * dx));
  double curv_max = 0.0;
  for (int i = 0; i < curv.n_nodes(); ++i)
    curv_max = std::max({curv_max, std::abs(curv.a[i]), std::abs(curv.b[i]),
                         std::abs(curv.r_scalar[i])});
  double dt = cfl_factor * h2_min;
  if (curv_max > 0.0) dt = std::min(dt, 0.1 / curv_max);
  return dt;
}

double cfl_dt(const WarpedMetric& m, double cfl_factor) {
  return cfl_dt(m, curvature(m), cfl_factor);
}

namespace {

WarpedMetric advance(const WarpedMetric& base, const FlowRhs& k, double w) {
  WarpedMetric out = base;
  out.ghosts_valid = false;
  const int nodes = base.grid.n_nodes();
  for (int i = 0; i < nodes; ++i) {
    out.rho[i] = base.rho[i] + w * k.drho[i];
    out.phi[i] = base.phi[i] + w * k.dphi[i];
  }
  out.time = base.time + w;  // rhs is autonomous; time kept for bookkeeping
  return out;
}

void check_state(const WarpedMetric& m) {
  const int n = m.n();
  for (int i = 0; i <= n; ++i) {
    if (!std::isfinite(m.phi[i]) || !std::isfinite(m.rho[i]))
      throw DegenerateMetric("step: non-finite state at node " + std::to_string(i), i);
  }
  for (int i = 1; i <= n; ++i) {
    if (!(m.phi[i] > 0.0))
      throw DegenerateMetric("step: phi <= 0 at node " + std::to_string(i), i);
    if (!(m.rho[i] > 0.0))
      throw DegenerateMetric("step: rho <= 0 at node " + std::to_string(i), i);
  }
}

}  // namespace

WarpedMetric step(const WarpedMetric& m, double dt, double dissipation) {
  const WarpedMetric m0 = apply_boundary_conditions(m);
  const FlowRhs k1 = ricci_rhs(m0, curvature_flow_closure(m0), dissipation);

  WarpedMetric s2 = apply_boundary_conditions(advance(m0, k1, 0.5 * dt));
  const FlowRhs k2 = ricci_rhs(s2, curvature_flow_closure(s2), dissipation);

  WarpedMetric s3 = apply_boundary_conditions(advance(m0, k2, 0.5 * dt));
  const FlowRhs k3 = ricci_rhs(s3, curvature_flow_closure(s3), dissipation);

  WarpedMetric s4 = apply_boundary_conditions(advance(m0, k3, dt));
  const FlowRhs k4 = ricci_rhs(s4, curvature_flow_closure(s4), dissipation);

  WarpedMetric out = m0;
  const int nodes = m.grid.n_nodes();
  for (int i = 0; i < nodes; ++i) {
    out.rho[i] = m0.rho[i] + dt / 6.0 * (k1.drho[i] + 2.0 * k2.drho[i] + 2.0 * k3.drho[i] + k4.drho[i]);
    out.phi[i] = m0.phi[i] + dt / 6.0 * (k1.dphi[i] + 2.0 * k2.dphi[i] + 2.0 * k3.dphi[i] + k4.dphi[i]);
  }
  out.time = m.time + dt;
  check_state(out);
  return apply_boundary_conditions(out);
}

FlowRecord record_from_state(const WarpedMetric& m, const CurvatureField& curv, double dt) {
  FlowRecord r;
  r.t = m.time;
  r.dt = dt;
  r.kappa = m.kappa;
  r.volume = volume(m);
  r.bc_residual = boundary_residual(m);
  r.origin_drift = origin_drift(m);

  const int nodes = curv.n_nodes();
  r.r_max = -std::numeric_limits<double>::max();
  r.r_min = std::numeric_limits<double>::max();
  r.ric_min = std::numeric_limits<double>::max();
  double gap = -std::numeric_limits<double>::max();
  double rm = 0.0;
  for (int i = 0; i < nodes; ++i) {
    r.r_max = std::max(r.r_max, curv.r_scalar[i]);
    r.r_min = std::min(r.r_min, curv.r_scalar[i]);
    r.ric_min = std::min(r.ric_min, std::min(curv.a[i], curv.b[i]));
    gap = std::max(gap, curv.s_norm[i] - curv.r_scalar[i] * curv.r_scalar[i] / 3.0);
    rm = std::max({rm, std::abs(curv.k_rad[i]), std::abs(curv.k_sph[i])});
  }
  r.pinch_gap_max = gap;
  r.rm_max = rm;

  const Field dk_rad = arclength_derivative(m, curv.k_rad);
  const Field dk_sph = arclength_derivative(m, curv.k_sph);
  double drm = 0.0;
  for (int i = 0; i < nodes; ++i)
    drm = std::max({drm, std::abs(dk_rad[i]), std::abs(dk_sph[i])});
  r.drm_max = drm;

  if (r.r_min > 0.0) {
    r.eps_star = eps_pinch(curv).value;
    r.f_max = f_ratio(curv).value;
  }

  const BoundaryState bs = boundary_normal_derivatives(m, curv);
  const IdentityResiduals ir = identity_residuals(bs);
  r.i1n = ir.i1n;
  r.i2n = ir.i2n;
  r.i3n = ir.i3n;
  if (bs.b_b > 0.0) r.h_margin = h_condition_margin(bs);
  return r;
}

FlowTrace run_metric(WarpedMetric m0, const FlowConfig& cfg) {
  if (!(cfg.cfl_factor > 0.0 && cfg.cfl_factor <= 0.5))
    throw InvalidInput("run: cfl_factor must lie in (0, 0.5]");
  if (cfg.record_every < 1) throw InvalidInput("run: record_every must be >= 1");
  if (!(cfg.r_stop > 0.0)) throw InvalidInput("run: r_stop must be positive");
  if (!(cfg.dissipation >= 0.0 && cfg.dissipation <= 0.5))
    throw InvalidInput("run: dissipation must lie in [0, 0.5]");

  WarpedMetric m = apply_boundary_conditions(m0);
  CurvatureField curv = curvature(m);

  double r_max0 = -std::numeric_limits<double>::max();
  for (double v : curv.r_scalar) r_max0 = std::max(r_max0, v);
  if (cfg.r_stop <= r_max0)
    throw InvalidInput("run: r_stop must exceed the initial max scalar curvature (" +
                       std::to_string(r_max0) + ")");

  FlowTrace trace;
  trace.records.push_back(record_from_state(m, curv, 0.0));
  trace.snapshots.push_back(m);

  long steps = 0;
  bool stopped = false;
  StopReason reason = StopReason::t_end;
  while (!stopped) {
    if (steps >= cfg.max_steps) {
      reason = StopReason::max_steps;
      break;
    }
    double dt = cfl_dt(m, curv, cfg.cfl_factor);
    if (cfg.t_end) {
      const double remaining = *cfg.t_end - m.time;
      if (remaining <= 0.0) {
        reason = StopReason::t_end;
        break;
      }
      dt = std::min(dt, remaining);
    }
    WarpedMetric next;
    try {
      next = step(m, dt, cfg.dissipation);
    } catch (const DegenerateMetric&) {
      reason = StopReason::degeneracy;
      break;  // keep the last valid state
    }
    m = std::move(next);
    ++steps;
    curv = curvature(m);

    double r_max = -std::numeric_limits<double>::max();
    bool curv_finite = true;
    for (double v : curv.r_scalar) {
      r_max = std::max(r_max, v);
      curv_finite = curv_finite && std::isfinite(v);
    }

    if (steps % cfg.record_every == 0) {
      trace.records.push_back(record_from_state(m, curv, dt));
      trace.snapshots.push_back(m);
    }
    if (!curv_finite) {
      // the metric is still finite but its curvature overflowed: degenerate,
      // not a clean blow-up stop
      reason = StopReason::degeneracy;
      stopped = true;
    } else if (r_max >= cfg.r_stop) {
      reason = StopReason::blow_up;
      stopped = true;
    } else if (cfg.t_end && m.time >= *cfg.t_end - 1e-12 * std::max(1.0, *cfg.t_end)) {
      reason = StopReason::t_end;
      stopped = true;
    }
    if (stopped && trace.records.back().t != m.time) {
      trace.records.push_back(record_from_state(m, curv, dt));
      trace.snapshots.push_back(m);
    }
  }
  if (!stopped && trace.records.back().t != m.time) {
    // stopped via break (degeneracy/max_steps/t_end edge): record last valid state
    trace.records.push_back(record_from_state(m, curvature(m), trace.records.back().dt));
    trace.snapshots.push_back(m);
  }
  trace.stop_reason = reason;
  trace.t_stop = m.time;
  trace.steps = steps;
  return trace;
}

FlowTrace run(const FlowConfig& cfg) {
  WarpedMetric m0 = make_preset(cfg.preset, cfg.preset_params, cfg.n_cells);
  return run_metric(std::move(m0), cfg);
}

NormalizedTrace normalize_trace(const FlowTrace& trace) {
  if (trace.snapshots.empty())
    throw InvalidInput("normalize_trace: trace has no snapshots");
  const size_t k = trace.snapshots.size();
  std::vector<double> ts(k), psis(k);
  NormalizedTrace out;
  out.records.resize(k);
  for (size_t i = 0; i < k; ++i) {
    const WarpedMetric& snap = trace.snapshots[i];
    const double vol = volume(snap);
    const double psi = std::pow(vol, -2.0 / 3.0);
    ts[i] = snap.time;
    psis[i] = psi;
    NormalizedRecord& r = out.records[i];
    r.t = snap.time;
    r.psi = psi;
    r.kappa_tilde = snap.kappa / std::sqrt(psi);

    const CurvatureField c = curvature(snap);
    // average scalar curvature of the unit-volume metric
    const int n = snap.n();
    double integral = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double w = (j == 0 || j == n) ? 0.5 : 1.0;
      integral += w * c.r_scalar[j] * snap.rho[j] * snap.phi[j] * snap.phi[j];
    }
    integral *= 4.0 * std::numbers::pi * snap.grid.dx();
    r.r_tilde = integral / vol / psi;

    double k_min = std::numeric_limits<double>::max();
    double k_max = -std::numeric_limits<double>::max();
    double k_sum = 0.0;
    for (int j = 0; j <= n; ++j) {
      for (double v : {c.k_rad[j] / psi, c.k_sph[j] / psi}) {
        k_min = std::min(k_min, v);
        k_max = std::max(k_max, v);
        k_sum += v;
      }
    }
    const double mean = k_sum / (2.0 * (n + 1));
    r.spread = mean == 0.0 ? 0.0 : (k_max - k_min) / mean;
  }
  const std::vector<double> t_tilde = cumulative_trapezoid(ts, psis);
  for (size_t i = 0; i < k; ++i) out.records[i].t_tilde = t_tilde[i];
  return out;
}

}  // namespace riccicap
