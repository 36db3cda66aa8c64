#ifndef RICCICAP_FLOW_HPP
#define RICCICAP_FLOW_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riccicap/curvature.hpp"
#include "riccicap/metric.hpp"

namespace riccicap {

// The rho equation is a pointwise ODE with no diffusion; near the regular
// center its curvature coupling carries a 1/phi ~ 1/s factor that turns
// grid-scale rho noise into an exponential instability under any centered
// closure. A parity-respecting fourth-difference dissipation on rho (O(dx^2),
// identically zero for x-uniform rho, scale-equivariant) suppresses it.
inline constexpr double kRhoDissipationDefault = 0.3;

struct FlowConfig {
  int n_cells = 256;
  double cfl_factor = 0.25;              // in (0, 0.5]
  std::optional<double> t_end;           // none = run to blow-up/degeneracy
  double r_stop = 1000.0;                // blow-up stop: R_max >= r_stop
  int record_every = 20;                 // monitor/snapshot cadence in steps
  std::string preset;                    // see presets.hpp
  std::map<std::string, double> preset_params;
  double origin_tol = 1e-3;              // |phi_s(0) - 1| drift tolerance
  double boundary_tol = 1e-10;           // Robin enforcement residual tolerance
  double dissipation = kRhoDissipationDefault;  // rho stabilization, in [0, 0.5]
  long max_steps = 20'000'000;           // hard safety stop
};

enum class StopReason { t_end, blow_up, degeneracy, max_steps };
std::string to_string(StopReason r);

// One monitor sample. Pinching monitors are nullopt when R <= 0 somewhere.
struct FlowRecord {
  double t = 0, dt = 0;
  double r_max = 0, r_min = 0;
  double ric_min = 0;                    // min over nodes of min(a,b)
  double volume = 0;
  std::optional<double> eps_star;        // min of min(a,b)/R
  std::optional<double> f_max;           // max of S/R^2
  double i1n = 0, i2n = 0, i3n = 0;      // normalized boundary-identity residuals
  std::optional<double> h_margin;        // a_b/(2 b_b)
  double kappa = 0;
  double rm_max = 0;                     // max |sectional curvature| proxy for |Rm|
  double drm_max = 0;                    // max |d_s sectional curvature| proxy for |DRm|
  double pinch_gap_max = 0;              // max over nodes of S - R^2/3 (>= 0)
  double bc_residual = 0;                // |phi_s(1) - kappa*phi(1)|, ghost stencil
  double origin_drift = 0;               // |phi_s(0) - 1|
};

// Time series of monitors plus a metric snapshot per record (same cadence).
struct FlowTrace {
  std::vector<FlowRecord> records;
  std::vector<WarpedMetric> snapshots;
  StopReason stop_reason = StopReason::t_end;
  double t_stop = 0;
  long steps = 0;
};

// Volume-normalized view of a trace: for each snapshot psi = Vol^{-2/3}
// (so psi*g has unit volume), t_tilde = integral of psi dt, kappa_tilde =
// kappa/sqrt(psi), r_tilde the average scalar curvature at unit volume, and
// spread = (max - min)/mean over all sectional curvatures of the normalized
// snapshot.
struct NormalizedRecord {
  double t = 0;        // unnormalized time of the source record
  double psi = 0;
  double t_tilde = 0;
  double kappa_tilde = 0;
  double r_tilde = 0;
  double spread = 0;
};

struct NormalizedTrace {
  std::vector<NormalizedRecord> records;
};

struct FlowRhs {
  Field drho;  // -a * rho
  Field dphi;  // -b * phi = phi_ss - (1 - phi_s^2)/phi away from the center
};

// dt*g = -2 Ric in the warped-product reduction. curv must come from m.
// dissipation adds the rho stabilization term (zero for x-uniform rho).
FlowRhs ricci_rhs(const WarpedMetric& m, const CurvatureField& curv,
                  double dissipation = kRhoDissipationDefault);

// Attaches ghost values: parity at the origin (phi odd, rho even); at x = 1
// the phi ghost realizes the centered Robin condition phi_s(1) = kappa*phi(1)
// and the rho ghost is quadratic extrapolation.
WarpedMetric apply_boundary_conditions(const WarpedMetric& m);

// dt = cfl * min over nodes of (rho*dx)^2, additionally capped by
// 0.1/max|curvature| so the reaction terms stay resolved.
double cfl_dt(const WarpedMetric& m, double cfl_factor);
double cfl_dt(const WarpedMetric& m, const CurvatureField& curv, double cfl_factor);

// One classical RK4 step of ricci_rhs with boundary conditions re-applied at
// every stage. Throws DegenerateMetric on NaN or nonpositive interior phi.
WarpedMetric step(const WarpedMetric& m, double dt,
                  double dissipation = kRhoDissipationDefault);

// Integrates from the config's preset (run) or a caller-built metric
// (run_metric) until t_end, blow-up, or degeneracy, recording monitors at the
// cadence. A degeneracy mid-run is recorded in the trace, not thrown away.
FlowTrace run(const FlowConfig& cfg);
FlowTrace run_metric(WarpedMetric m0, const FlowConfig& cfg);

// Post-hoc volume/time renormalization of a finished trace.
NormalizedTrace normalize_trace(const FlowTrace& trace);

// Monitor sample from a state with ghosts attached; the runner and the
// report regenerator share this path so persisted traces re-derive bitwise
// identical monitors.
FlowRecord record_from_state(const WarpedMetric& m, const CurvatureField& curv, double dt);

}  // namespace riccicap

#endif
