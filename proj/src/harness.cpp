#include "riccicap/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "riccicap/numerics.hpp"
#include "riccicap/presets.hpp"

namespace riccicap::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw InvalidInput("config line " + std::to_string(line) + ": key '" + key +
                       "': cannot parse value '" + v + "'");
  return x;
}

int parse_int(const std::string& v, const std::string& key, int line) {
  const double x = parse_double(v, key, line);
  if (x != std::floor(x))
    throw InvalidInput("config line " + std::to_string(line) + ": key '" + key +
                       "': expected an integer, got '" + v + "'");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& v, const std::string& key, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw InvalidInput("config line " + std::to_string(line) + ": key '" + key +
                     "': expected true/false, got '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& v, const std::string& key, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(item, key, line));
  }
  if (out.empty())
    throw InvalidInput("config line " + std::to_string(line) + ": key '" + key +
                       "': expected a comma-separated list");
  return out;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

FlowConfig HarnessConfig::flow() const {
  FlowConfig f;
  f.n_cells = n_cells;
  f.cfl_factor = cfl;
  if (t_end >= 0) f.t_end = t_end;
  f.r_stop = r_stop;
  f.record_every = record_every;
  f.preset = preset;
  if (s_max > 0) f.preset_params["s_max"] = s_max;
  f.preset_params["amp"] = amp;
  f.preset_params["mode"] = mode;
  f.preset_params["flat"] = flat;
  f.origin_tol = origin_tol;
  f.boundary_tol = boundary_tol;
  f.dissipation = dissipation;
  return f;
}

HarnessConfig parse_config(const std::string& text) {
  HarnessConfig cfg;
  std::map<std::string, int> seen;  // key -> first line, duplicate rejection
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key = trim(raw.substr(0, eq));
    const std::string val = trim(raw.substr(eq + 1));
    if (key.empty() || val.empty())
      throw InvalidInput("config line " + std::to_string(line) + ": empty key or value");
    if (auto it = seen.find(key); it != seen.end())
      throw InvalidInput("config line " + std::to_string(line) + ": duplicate key '" + key +
                         "' (first set on line " + std::to_string(it->second) + ")");
    seen[key] = line;

    if (key == "preset") {
      if (!preset_name_valid(val))
        throw InvalidInput("config line " + std::to_string(line) + ": unknown preset '" + val +
                           "'");
      cfg.preset = val;
    } else if (key == "s_max") {
      cfg.s_max = parse_double(val, key, line);
    } else if (key == "amp") {
      cfg.amp = parse_double(val, key, line);
    } else if (key == "mode") {
      cfg.mode = parse_int(val, key, line);
    } else if (key == "flat") {
      cfg.flat = parse_double(val, key, line);
    } else if (key == "n_cells") {
      cfg.n_cells = parse_int(val, key, line);
    } else if (key == "cfl") {
      cfg.cfl = parse_double(val, key, line);
    } else if (key == "t_end") {
      cfg.t_end = (val == "none") ? -1 : parse_double(val, key, line);
    } else if (key == "r_stop") {
      cfg.r_stop = parse_double(val, key, line);
    } else if (key == "record_every") {
      cfg.record_every = parse_int(val, key, line);
    } else if (key == "delta") {
      cfg.delta = (val == "auto") ? -1 : parse_double(val, key, line);
    } else if (key == "thetas") {
      cfg.thetas = parse_double_list(val, key, line);
    } else if (key == "monitor_identities") {
      cfg.monitor_identities = parse_bool(val, key, line);
    } else if (key == "monitor_pinching") {
      cfg.monitor_pinching = parse_bool(val, key, line);
    } else if (key == "origin_tol") {
      cfg.origin_tol = parse_double(val, key, line);
    } else if (key == "boundary_tol") {
      cfg.boundary_tol = parse_double(val, key, line);
    } else if (key == "dissipation") {
      cfg.dissipation = parse_double(val, key, line);
    } else if (key == "output_dir") {
      cfg.output_dir = val;
    } else if (key == "emit_csv") {
      cfg.emit_csv = parse_bool(val, key, line);
    } else if (key == "emit_json") {
      cfg.emit_json = parse_bool(val, key, line);
    } else if (key == "emit_plots") {
      cfg.emit_plots = parse_bool(val, key, line);
    } else {
      throw InvalidInput("config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }

  if (cfg.preset.empty()) throw InvalidInput("config: a preset is required (key 'preset')");
  if (cfg.preset != "flat_cap" && !(cfg.s_max > 0))
    throw InvalidInput("config: preset '" + cfg.preset + "' requires s_max > 0");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 0.5))
    throw InvalidInput("config: cfl = " + fmt17(cfg.cfl) + " out of (0, 0.5]");
  if (cfg.n_cells < 16) throw InvalidInput("config: n_cells must be >= 16");
  if (cfg.record_every < 1) throw InvalidInput("config: record_every must be >= 1");
  if (!(cfg.r_stop > 0)) throw InvalidInput("config: r_stop must be positive");
  if (cfg.t_end >= 0 && !(cfg.t_end > 0)) throw InvalidInput("config: t_end must be positive");
  if (cfg.delta >= 0 && cfg.delta > 0.5)
    throw InvalidInput("config: delta must lie in [0, 0.5] or be 'auto'");
  for (double th : cfg.thetas)
    if (!(th > 0.0 && th < 1.0)) throw InvalidInput("config: thetas must lie in (0, 1)");
  if (!(cfg.origin_tol > 0) || !(cfg.boundary_tol > 0))
    throw InvalidInput("config: tolerances must be positive");
  if (!(cfg.dissipation >= 0.0 && cfg.dissipation <= 0.5))
    throw InvalidInput("config: dissipation must lie in [0, 0.5]");
  if (cfg.output_dir.empty()) throw InvalidInput("config: output_dir must not be empty");
  return cfg;
}

HarnessConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const HarnessConfig& c) {
  std::ostringstream out;
  out << "preset = " << c.preset << "\n";
  out << "s_max = " << fmt17(c.s_max) << "\n";
  out << "amp = " << fmt17(c.amp) << "\n";
  out << "mode = " << fmt17(c.mode) << "\n";
  out << "flat = " << fmt17(c.flat) << "\n";
  out << "n_cells = " << c.n_cells << "\n";
  out << "cfl = " << fmt17(c.cfl) << "\n";
  out << "t_end = " << (c.t_end < 0 ? std::string("none") : fmt17(c.t_end)) << "\n";
  out << "r_stop = " << fmt17(c.r_stop) << "\n";
  out << "record_every = " << c.record_every << "\n";
  out << "delta = " << (c.delta < 0 ? std::string("auto") : fmt17(c.delta)) << "\n";
  out << "thetas = ";
  for (size_t i = 0; i < c.thetas.size(); ++i)
    out << (i ? "," : "") << fmt17(c.thetas[i]);
  out << "\n";
  out << "monitor_identities = " << (c.monitor_identities ? "true" : "false") << "\n";
  out << "monitor_pinching = " << (c.monitor_pinching ? "true" : "false") << "\n";
  out << "origin_tol = " << fmt17(c.origin_tol) << "\n";
  out << "boundary_tol = " << fmt17(c.boundary_tol) << "\n";
  out << "dissipation = " << fmt17(c.dissipation) << "\n";
  out << "output_dir = " << c.output_dir << "\n";
  out << "emit_csv = " << (c.emit_csv ? "true" : "false") << "\n";
  out << "emit_json = " << (c.emit_json ? "true" : "false") << "\n";
  out << "emit_plots = " << (c.emit_plots ? "true" : "false") << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

bool is_hemisphere(const HarnessConfig& cfg, const FlowTrace& trace) {
  return cfg.preset == "round_cap" && !trace.records.empty() &&
         std::abs(trace.records.front().kappa) <= 1e-10;
}

bool kappa_positive(const FlowTrace& trace) {
  return !trace.records.empty() && trace.records.front().kappa > 1e-10;
}

Verdict make_verdict(const std::string& name, const std::string& kind, bool pass, double measured,
                     double tolerance, const std::string& detail, int from, int to) {
  return Verdict{name, kind, pass ? "pass" : "fail", measured, tolerance, detail, from, to};
}

Verdict skip_verdict(const std::string& name, const std::string& kind, const std::string& detail) {
  return Verdict{name, kind, "skip", 0.0, 0.0, detail, 0, 0};
}

const char* kProperty = "analytic property";
const char* kRegression = "regression target";

}  // namespace

RunReport build_report(const HarnessConfig& cfg, const FlowTrace& trace,
                       const NormalizedTrace& norm) {
  RunReport rep;
  rep.stop_reason = to_string(trace.stop_reason);
  rep.t_stop = trace.t_stop;
  rep.steps = trace.steps;
  rep.config_echo = cfg;
  rep.n_cells = cfg.n_cells;
  rep.defaults_version = "defaults-1";

  const auto& recs = trace.records;
  const int last = static_cast<int>(recs.size()) - 1;
  auto& v = rep.verdicts;

  // Robin enforcement residual, ghost stencil
  {
    double worst = 0;
    for (const auto& r : recs) worst = std::max(worst, r.bc_residual);
    v.push_back(make_verdict("boundary_robin_residual", kRegression, worst <= cfg.boundary_tol,
                             worst, cfg.boundary_tol, "max |phi_s(1) - kappa*phi(1)| over run", 0,
                             last));
  }
  // origin regularity drift
  {
    double worst = 0;
    for (const auto& r : recs) worst = std::max(worst, r.origin_drift);
    v.push_back(make_verdict("origin_regularity_drift", kRegression, worst <= cfg.origin_tol,
                             worst, cfg.origin_tol, "max |phi_s(0) - 1| over run", 0, last));
  }

  const bool positive_initially = recs.front().ric_min > 0;

  // dVol/dt = -integral of R dV < 0 with Ric > 0
  if (positive_initially) {
    double worst = -std::numeric_limits<double>::max();
    for (size_t i = 1; i < recs.size(); ++i)
      worst = std::max(worst, recs[i].volume - recs[i - 1].volume);
    v.push_back(make_verdict("volume_strictly_decreasing", kProperty, worst < 0, worst, 0.0,
                             "max consecutive volume increment", 0, last));
  } else {
    v.push_back(skip_verdict("volume_strictly_decreasing", kProperty,
                             "initial data not positive-Ricci"));
  }

  // Ric > 0 is preserved (discrete tolerance relative to R_max)
  if (positive_initially) {
    double margin = std::numeric_limits<double>::max();
    for (const auto& r : recs) margin = std::min(margin, r.ric_min + 1e-3 * r.r_max);
    v.push_back(make_verdict("ricci_positivity_preserved", kProperty, margin > 0, margin, 0.0,
                             "min over run of ric_min + 1e-3*R_max", 0, last));
  } else {
    v.push_back(skip_verdict("ricci_positivity_preserved", kProperty,
                             "initial data not positive-Ricci"));
  }

  // eps* never drops below its initial value (discrete tolerance 1e-3)
  {
    bool all_defined = true;
    for (const auto& r : recs) all_defined = all_defined && r.eps_star.has_value();
    if (all_defined && !recs.empty()) {
      const double eps0 = *recs.front().eps_star;
      double min_eps = std::numeric_limits<double>::max();
      for (const auto& r : recs) min_eps = std::min(min_eps, *r.eps_star);
      std::string note = "min over run of eps*; initial eps* = " + fmt17(eps0);
      if (eps0 >= 0.25)
        note += "; initial eps* >= 1/4: outside the guaranteed preservation cone";
      v.push_back(make_verdict("eps_pinch_preserved", kProperty, min_eps >= eps0 - 1e-3, min_eps,
                               eps0 - 1e-3, note, 0, last));
    } else {
      v.push_back(skip_verdict("eps_pinch_preserved", kProperty, "R <= 0 somewhere on the run"));
    }
  }

  // f = S/R^2 stays bounded away from 1
  {
    bool all_defined = true;
    for (const auto& r : recs) all_defined = all_defined && r.f_max.has_value();
    if (all_defined && !recs.empty()) {
      const double f0 = *recs.front().f_max;
      double fmax = 0;
      for (const auto& r : recs) fmax = std::max(fmax, *r.f_max);
      const double bound = std::max(f0 + 0.02, 0.9);
      v.push_back(make_verdict("f_bounded_away_from_one", kProperty, fmax <= bound, fmax, bound,
                               "max over run of f_max; initial f_max = " + fmt17(f0), 0, last));
    } else {
      v.push_back(skip_verdict("f_bounded_away_from_one", kProperty, "R <= 0 somewhere on the run"));
    }
  }

  // normalized-residual algebra: i3n = i1n + 2*i2n to round-off
  {
    double worst = 0;
    for (const auto& r : recs) worst = std::max(worst, std::abs(r.i3n - (r.i1n + 2.0 * r.i2n)));
    v.push_back(make_verdict("identity_residual_algebra", kRegression, worst <= 1e-12, worst,
                             1e-12, "max |i3n - (i1n + 2 i2n)| over run", 0, last));
  }

  // exact shrinking solution (hemisphere only): R_max(t)(1-4t)/6 ~ 1, stop near T = 1/4
  if (is_hemisphere(cfg, trace)) {
    double worst = 0;
    for (const auto& r : recs)
      if (r.t <= 0.2) worst = std::max(worst, std::abs(r.r_max * (1.0 - 4.0 * r.t) / 6.0 - 1.0));
    v.push_back(make_verdict("exact_shrink_rmax_law", kRegression, worst <= 0.01, worst, 0.01,
                             "max |R_max(t)(1-4t)/6 - 1| for t <= 0.2", 0, last));
    if (trace.stop_reason == StopReason::blow_up) {
      const double rel = std::abs(trace.t_stop - 0.25) / 0.25;
      v.push_back(make_verdict("exact_shrink_stop_time", kRegression, rel <= 0.01, rel, 0.01,
                               "blow-up stop time " + fmt17(trace.t_stop) + " vs T = 1/4", 0,
                               last));
    }
    // self-similar solution is a fixed point of the normalized flow
    double spread_max = 0, kt_max = 0, rt_drift = 0;
    const double rt0 = norm.records.front().r_tilde;
    for (const auto& r : norm.records) {
      spread_max = std::max(spread_max, std::abs(r.spread));
      kt_max = std::max(kt_max, std::abs(r.kappa_tilde));
      rt_drift = std::max(rt_drift, std::abs(r.r_tilde - rt0) / std::abs(rt0));
    }
    const double worst_stationary = std::max({spread_max, kt_max, rt_drift});
    // pinned at the n = 256 reference; the spread floor scales at O(dx^2)
    const double stat_tol = 1e-6 * std::pow(256.0 / cfg.n_cells, 2.0);
    v.push_back(make_verdict("normalized_stationary", kRegression, worst_stationary <= stat_tol,
                             worst_stationary, stat_tol,
                             "max of spread, |kappa_tilde|, rel r_tilde drift", 0, last));
  }

  // Ricci-flat stationary data stays put
  if (cfg.preset == "flat_cap") {
    double worst = 0;
    for (const auto& r : recs) worst = std::max(worst, std::max(std::abs(r.r_max), std::abs(r.r_min)));
    v.push_back(make_verdict("stationary", kRegression, worst <= 1e-6, worst, 1e-6,
                             "max |R| over run (Ricci-flat data)", 0, last));
  }

  // finite-time blow-up for positive-Ricci data on unbounded runs
  if (positive_initially && cfg.t_end < 0) {
    const bool pass = trace.stop_reason == StopReason::blow_up;
    v.push_back(make_verdict("blow_up_reached", kProperty, pass, trace.t_stop, 0.0,
                             "stop reason: " + rep.stop_reason, 0, last));
  }

  // S - R^2/3 <= C R^(2-delta): fitted slope over the last two decades
  {
    try {
      const DeltaPinchFit fit = delta_pinch_fit(trace);
      if (fit.identically_zero) {
        v.push_back(make_verdict("delta_pinch_slope", kProperty, true, 0.0, 1.99,
                                 "S - R^2/3 identically zero (round metric)", fit.window_from,
                                 fit.window_to));
      } else {
        v.push_back(make_verdict("delta_pinch_slope", kProperty, fit.slope <= 1.99, fit.slope,
                                 1.99,
                                 "log-log slope, stderr " + fmt17(fit.slope_stderr),
                                 fit.window_from, fit.window_to));
      }
    } catch (const FitWindowError& e) {
      v.push_back(skip_verdict("delta_pinch_slope", kProperty,
                               std::string("insufficient range: ") + e.what()));
    }
  }

  // convergence of the normalized flow for kappa > 0: kappa_tilde and spread
  // eventually decrease
  if (kappa_positive(trace) && norm.records.size() >= 6) {
    const int n = static_cast<int>(norm.records.size());
    const int from = 2 * n / 3;
    double worst_kt = -std::numeric_limits<double>::max();
    double worst_sp = -std::numeric_limits<double>::max();
    double sp_scale = 0;
    for (int i = from; i < n; ++i) sp_scale = std::max(sp_scale, norm.records[i].spread);
    for (int i = from + 1; i < n; ++i) {
      worst_kt = std::max(worst_kt, norm.records[i].kappa_tilde - norm.records[i - 1].kappa_tilde);
      worst_sp = std::max(worst_sp, norm.records[i].spread - norm.records[i - 1].spread);
    }
    const double kt_slack = 1e-14 * std::abs(norm.records.front().kappa_tilde);
    v.push_back(make_verdict("kappa_tilde_decreasing", kProperty, worst_kt <= kt_slack, worst_kt,
                             kt_slack, "max consecutive kappa_tilde increment, final third", from,
                             n - 1));
    const double sp_slack = 1e-3 * sp_scale;
    v.push_back(make_verdict("spread_decreasing", kProperty, worst_sp <= sp_slack, worst_sp,
                             sp_slack, "max consecutive spread increment, final third", from,
                             n - 1));
    std::vector<double> xs, ys;
    for (int i = from; i < n; ++i) {
      if (norm.records[i].spread > 0) {
        xs.push_back(norm.records[i].t_tilde);
        ys.push_back(std::log(norm.records[i].spread));
      }
    }
    if (xs.size() >= 3) {
      const double slope = linear_fit(xs, ys).slope;
      v.push_back(make_verdict("spread_log_slope_negative", kProperty, slope < 0, slope, 0.0,
                               "least-squares slope of log(spread) vs t_tilde, final third", from,
                               n - 1));
    } else {
      v.push_back(skip_verdict("spread_log_slope_negative", kProperty,
                               "spread nonpositive over the fit window"));
    }
  } else if (kappa_positive(trace)) {
    v.push_back(
        skip_verdict("kappa_tilde_decreasing", kProperty, "too few records for the final third"));
  }

  return rep;
}

bool RunReport::failed() const {
  for (const auto& v : verdicts)
    if (v.status == "fail") return true;
  return false;
}

PinchingReport build_pinching_report(const HarnessConfig& cfg, const FlowTrace& trace,
                                     const std::vector<double>& f_delta_max) {
  PinchingReport rep;
  rep.delta_used = cfg.delta;
  const WarpedMetric& final_snap = trace.snapshots.back();
  const CurvatureField curv = curvature(final_snap);
  bool positive = true;
  for (double r : curv.r_scalar) positive = positive && r > 0;
  if (positive) {
    const NodeValue e = eps_pinch(curv);
    rep.eps_star = e.value;
    rep.eps_node = e.node;
    const NodeValue f = f_ratio(curv);
    rep.f_max = f.value;
    rep.f_node = f.node;
    const NodeValue fd = f_delta(curv, cfg.delta);
    rep.f_delta_max = fd.value;
    rep.f_delta_node = fd.node;
  } else if (!f_delta_max.empty()) {
    rep.f_delta_max = f_delta_max.back();
  }
  double margin = std::numeric_limits<double>::max();
  bool margin_defined = true;
  for (const auto& r : trace.records) {
    if (!r.h_margin) {
      margin_defined = false;
      break;
    }
    margin = std::min(margin, *r.h_margin);
  }
  if (margin_defined && !trace.records.empty()) rep.h_margin_min = margin;
  try {
    rep.delta_fit = delta_pinch_fit(trace);
  } catch (const FitWindowError&) {
    rep.delta_fit = std::nullopt;
  }
  rep.grad_constants = gradient_ratio(trace, cfg.thetas);
  return rep;
}

RunArtifacts execute_run(const HarnessConfig& cfg_in) {
  RunArtifacts art;
  art.config = cfg_in;

  WarpedMetric m0 = make_preset(cfg_in.preset, cfg_in.flow().preset_params, cfg_in.n_cells);

  // resolve delta = min(0.1, 2*eps*(0)^2) when on auto
  if (art.config.delta < 0) {
    const CurvatureField c0 = curvature(apply_boundary_conditions(m0));
    bool positive = true;
    for (double r : c0.r_scalar) positive = positive && r > 0;
    if (positive) {
      const double eps0 = eps_pinch(c0).value;
      art.config.delta = std::min(0.1, 2.0 * eps0 * eps0);
    } else {
      art.config.delta = 0.0;
    }
  }

  art.trace = run_metric(std::move(m0), art.config.flow());
  art.norm = normalize_trace(art.trace);

  art.f_delta_max.reserve(art.trace.snapshots.size());
  for (const auto& snap : art.trace.snapshots) {
    const CurvatureField c = curvature(snap);
    bool positive = true;
    for (double r : c.r_scalar) positive = positive && r > 0;
    art.f_delta_max.push_back(positive ? f_delta(c, art.config.delta).value
                                       : std::numeric_limits<double>::quiet_NaN());
  }

  art.report = build_report(art.config, art.trace, art.norm);
  return art;
}

}  // namespace riccicap::harness
