#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "riccicap/harness.hpp"
#include "riccicap/numerics.hpp"
#include "riccicap/plot.hpp"
#include "riccicap/presets.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace riccicap::harness {

const char* const kTraceHeader =
    "t,dt,R_max,R_min,ric_min,volume,eps_star,f_max,f_delta_max,i1n,i2n,i3n,h_margin,"
    "kappa_tilde,t_tilde,spread_norm";

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double opt_or_nan(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

std::string snapshot_name(size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snap_%06zu.json", k);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out << text;
}

std::vector<std::vector<double>> trace_rows(const RunArtifacts& art) {
  std::vector<std::vector<double>> rows;
  rows.reserve(art.trace.records.size());
  for (size_t k = 0; k < art.trace.records.size(); ++k) {
    const FlowRecord& r = art.trace.records[k];
    const NormalizedRecord& nr = art.norm.records[k];
    rows.push_back({r.t, r.dt, r.r_max, r.r_min, r.ric_min, r.volume, opt_or_nan(r.eps_star),
                    opt_or_nan(r.f_max), art.f_delta_max[k], r.i1n, r.i2n, r.i3n,
                    opt_or_nan(r.h_margin), nr.kappa_tilde, nr.t_tilde, nr.spread});
  }
  return rows;
}

std::string csv_text(const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  out << kTraceHeader << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt17(row[i]);
    out << "\n";
  }
  return out.str();
}

ordered_json snapshot_json(const WarpedMetric& m) {
  ordered_json j;
  j["time"] = m.time;
  j["kappa"] = m.kappa;
  j["n_cells"] = m.n();
  j["rho"] = m.rho;
  j["phi"] = m.phi;
  return j;
}

ordered_json verdict_json(const Verdict& v) {
  ordered_json j;
  j["name"] = v.name;
  j["kind"] = v.kind;
  j["status"] = v.status;
  j["measured"] = v.measured;
  j["tolerance"] = v.tolerance;
  j["detail"] = v.detail;
  j["rec_from"] = v.rec_from;
  j["rec_to"] = v.rec_to;
  return j;
}

ordered_json report_json(const RunReport& rep, const PinchingReport& pin) {
  ordered_json j;
  j["stop_reason"] = rep.stop_reason;
  j["t_stop"] = rep.t_stop;
  ordered_json verdicts = ordered_json::array();
  for (const auto& v : rep.verdicts) verdicts.push_back(verdict_json(v));
  j["verdicts"] = verdicts;

  ordered_json p;
  p["eps_star"] = pin.eps_star;
  p["eps_node"] = pin.eps_node;
  p["f_max"] = pin.f_max;
  p["f_node"] = pin.f_node;
  p["f_delta_max"] = pin.f_delta_max;
  p["f_delta_node"] = pin.f_delta_node;
  p["delta_used"] = pin.delta_used;
  if (pin.h_margin_min) p["h_margin_min"] = *pin.h_margin_min;
  if (pin.delta_fit) {
    ordered_json f;
    f["identically_zero"] = pin.delta_fit->identically_zero;
    f["slope"] = pin.delta_fit->slope;
    f["intercept"] = pin.delta_fit->intercept;
    f["slope_stderr"] = pin.delta_fit->slope_stderr;
    f["window_from"] = pin.delta_fit->window_from;
    f["window_to"] = pin.delta_fit->window_to;
    p["delta_fit"] = f;
  } else {
    p["delta_fit"] = nullptr;
  }
  ordered_json grads = ordered_json::array();
  for (const auto& g : pin.grad_constants) {
    ordered_json gj;
    gj["theta"] = g.theta;
    gj["c"] = g.c;
    gj["c32"] = g.c32;
    grads.push_back(gj);
  }
  p["grad_constants"] = grads;
  j["pinching"] = p;

  ordered_json prov;
  prov["config_echo"] = serialize_config(rep.config_echo);
  prov["grid"] = {{"n_cells", rep.n_cells}, {"dx", 1.0 / rep.n_cells}};
  prov["defaults_version"] = rep.defaults_version;
  j["provenance"] = prov;
  return j;
}

void print_report(const RunReport& rep, bool quiet) {
  if (quiet) return;
  std::cout << "stop_reason = " << rep.stop_reason << ", t_stop = " << fmt17(rep.t_stop) << "\n";
  for (const auto& v : rep.verdicts) {
    std::cout << "  [" << v.status << "] " << v.name;
    if (v.status != "skip")
      std::cout << ": measured " << fmt17(v.measured) << " vs tolerance " << fmt17(v.tolerance);
    if (!v.detail.empty()) std::cout << "  (" << v.detail << ")";
    std::cout << "\n";
  }
}

void write_plots(const fs::path& dir, const HarnessConfig& cfg,
                 const std::vector<std::vector<double>>& rows);

}  // namespace

void write_run_dir(const std::string& dir_in, const RunArtifacts& art, bool quiet) {
  const fs::path dir(dir_in);
  fs::create_directories(dir);
  write_text(dir / "config_echo.cfg", serialize_config(art.config));

  const auto rows = trace_rows(art);
  if (art.config.emit_csv) write_text(dir / "trace.csv", csv_text(rows));

  if (art.config.emit_json) {
    fs::create_directories(dir / "snapshots");
    for (size_t k = 0; k < art.trace.snapshots.size(); ++k)
      write_text(dir / "snapshots" / snapshot_name(k),
                 snapshot_json(art.trace.snapshots[k]).dump(2) + "\n");
    const PinchingReport pin = build_pinching_report(art.config, art.trace, art.f_delta_max);
    write_text(dir / "report.json", report_json(art.report, pin).dump(2) + "\n");
  }
  if (art.config.emit_plots) write_plots(dir, art.config, rows);
  if (!quiet)
    std::cout << "wrote " << rows.size() << " records to " << dir.string() << "\n";
}

LoadedRun load_run_dir(const std::string& path_in) {
  fs::path dir(path_in);
  if (!fs::is_directory(dir)) {
    if (dir.filename() == "trace.csv")
      dir = dir.parent_path();
    else
      throw SchemaError("'" + path_in + "' is neither a run directory nor a trace.csv path");
  }
  const fs::path csv_path = dir / "trace.csv";
  if (!fs::exists(csv_path)) throw SchemaError("missing " + csv_path.string());
  const fs::path cfg_path = dir / "config_echo.cfg";
  if (!fs::exists(cfg_path)) throw SchemaError("missing " + cfg_path.string());

  LoadedRun loaded;
  loaded.config = parse_config_file(cfg_path.string());

  std::ifstream in(csv_path);
  std::string header;
  if (!std::getline(in, header)) throw SchemaError("trace.csv: missing header");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header != kTraceHeader)
    throw SchemaError("trace.csv: header mismatch, expected '" + std::string(kTraceHeader) + "'");

  const std::vector<std::string> columns = [] {
    std::vector<std::string> cols;
    std::stringstream ss(kTraceHeader);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
    return cols;
  }();

  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    std::vector<double> vals;
    std::stringstream ls(line);
    std::string cell;
    size_t col = 0;
    while (std::getline(ls, cell, ',')) {
      if (col >= columns.size())
        throw SchemaError("trace.csv row " + std::to_string(row) + ": too many columns");
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw SchemaError("trace.csv row " + std::to_string(row) + ": cannot parse column '" +
                          columns[col] + "' from '" + cell + "'");
      vals.push_back(v);
      ++col;
    }
    if (col != columns.size())
      throw SchemaError("trace.csv row " + std::to_string(row) + ": expected " +
                        std::to_string(columns.size()) + " columns, got " + std::to_string(col) +
                        " (first missing: '" + columns[col] + "')");
    loaded.csv_rows.push_back(std::move(vals));
  }

  // snapshots referenced by the trace must all exist and match
  const int n_cfg = loaded.config.n_cells;
  for (size_t k = 0; k < loaded.csv_rows.size(); ++k) {
    const fs::path sp = dir / "snapshots" / snapshot_name(k);
    if (!fs::exists(sp)) throw SchemaError("missing snapshot file " + sp.string());
    std::ifstream sin(sp);
    ordered_json j;
    try {
      sin >> j;
    } catch (const std::exception& e) {
      throw SchemaError(sp.string() + ": invalid JSON (" + e.what() + ")");
    }
    for (const char* field : {"time", "kappa", "n_cells", "rho", "phi"})
      if (!j.contains(field))
        throw SchemaError(sp.string() + ": missing field '" + std::string(field) + "'");
    const int n = j["n_cells"].get<int>();
    if (n != n_cfg)
      throw SchemaError(sp.string() + ": field 'n_cells' = " + std::to_string(n) +
                        " does not match config n_cells = " + std::to_string(n_cfg));
    WarpedMetric m;
    m.grid = RadialGrid(n);
    m.rho = j["rho"].get<std::vector<double>>();
    m.phi = j["phi"].get<std::vector<double>>();
    m.kappa = j["kappa"].get<double>();
    m.time = j["time"].get<double>();
    if (static_cast<int>(m.rho.size()) != n + 1 || static_cast<int>(m.phi.size()) != n + 1)
      throw SchemaError(sp.string() + ": rho/phi arrays must have n_cells + 1 entries");
    if (m.time != loaded.csv_rows[k][0])
      throw SchemaError(sp.string() + ": snapshot time does not match trace.csv row " +
                        std::to_string(k + 1));
    m = apply_boundary_conditions(m);
    loaded.trace.snapshots.push_back(m);
    loaded.trace.records.push_back(record_from_state(m, curvature(m), loaded.csv_rows[k][1]));
  }

  if (!loaded.trace.records.empty()) {
    const FlowRecord& lastr = loaded.trace.records.back();
    if (!std::isfinite(lastr.r_max))
      loaded.trace.stop_reason = StopReason::degeneracy;
    else if (lastr.r_max >= loaded.config.r_stop)
      loaded.trace.stop_reason = StopReason::blow_up;
    else if (loaded.config.t_end >= 0 &&
             lastr.t >= loaded.config.t_end - 1e-12 * std::max(1.0, loaded.config.t_end))
      loaded.trace.stop_reason = StopReason::t_end;
    else
      loaded.trace.stop_reason = StopReason::degeneracy;
    loaded.trace.t_stop = lastr.t;
  }
  return loaded;
}

// ---------------------------------------------------------------------------

int cmd_run(const HarnessConfig& cfg, bool quiet) {
  RunArtifacts art = execute_run(cfg);
  write_run_dir(art.config.output_dir, art, quiet);
  print_report(art.report, quiet);
  const bool bad = art.report.failed() || art.trace.stop_reason == StopReason::degeneracy;
  return bad ? 1 : 0;
}

double hemisphere_solution_error(const FlowTrace& trace, double s_max) {
  const WarpedMetric& m = trace.snapshots.back();
  const double t = m.time;
  const double c = std::sqrt(1.0 - 4.0 * t);
  double err = 0;
  for (int i = 0; i <= m.n(); ++i) {
    const double s = s_max * m.grid.x(i);
    err = std::max(err, std::abs(m.phi[i] - c * std::sin(s)));
    err = std::max(err, std::abs(m.rho[i] - c * s_max));
  }
  return err / c;
}

int cmd_study(const HarnessConfig& cfg, const std::vector<int>& n_list, bool quiet) {
  if (n_list.size() < 3)
    throw InvalidInput("study: need at least 3 grid sizes (got " +
                       std::to_string(n_list.size()) + ")");
  for (size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1]) throw InvalidInput("study: n_list must be ascending");
  if (!(cfg.t_end > 0)) throw InvalidInput("study: config must set t_end (the sample time t*)");

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  int status = 0;

  // boundary-identity residual study (partial rows preserved on failure)
  {
    std::vector<IdentityStudyRow> rows;
    std::string error;
    for (int n : n_list) {
      FlowConfig fc = cfg.flow();
      fc.n_cells = n;
      try {
        FlowTrace trace = run(fc);
        if (trace.stop_reason != StopReason::t_end)
          throw StudyError("run at n = " + std::to_string(n) + " stopped with reason '" +
                           to_string(trace.stop_reason) + "' before t* = " + fmt17(cfg.t_end));
        const WarpedMetric& m = trace.snapshots.back();
        const IdentityResiduals r =
            identity_residuals(boundary_normal_derivatives(m, curvature(m)));
        rows.push_back({n, r.i1n, r.i2n, r.i3n});
      } catch (const std::exception& e) {
        error = e.what();
        status = 1;
        break;
      }
    }
    std::ostringstream out;
    out << "n,i1n,i2n,i3n\n";
    for (const auto& r : rows)
      out << r.n_cells << "," << fmt17(r.i1n) << "," << fmt17(r.i2n) << "," << fmt17(r.i3n)
          << "\n";
    auto fit_order = [&rows](auto pick) -> double {
      std::vector<double> xs, ys;
      for (const auto& r : rows) {
        const double v = std::abs(pick(r));
        if (v <= 0) return 0.0;
        xs.push_back(std::log(static_cast<double>(r.n_cells)));
        ys.push_back(std::log(v));
      }
      if (xs.size() < 2) return 0.0;
      return -linear_fit(xs, ys).slope;
    };
    if (rows.size() >= 2) {
      out << "# fitted_order_i1 = " << fmt17(fit_order([](auto& r) { return r.i1n; })) << "\n";
      out << "# fitted_order_i2 = " << fmt17(fit_order([](auto& r) { return r.i2n; })) << "\n";
      out << "# fitted_order_i3 = " << fmt17(fit_order([](auto& r) { return r.i3n; })) << "\n";
    }
    if (!error.empty()) out << "# study aborted: " << error << "\n";
    write_text(dir / "study_identity_residuals.csv", out.str());
    if (!quiet) std::cout << "wrote " << (dir / "study_identity_residuals.csv").string() << "\n";
  }

  // exact-solution error study (shrinking hemisphere only)
  const bool hemisphere =
      cfg.preset == "round_cap" && std::abs(std::cos(cfg.s_max) / std::sin(cfg.s_max)) <= 1e-10;
  if (hemisphere) {
    std::vector<std::pair<int, double>> rows;
    std::string error;
    for (int n : n_list) {
      FlowConfig fc = cfg.flow();
      fc.n_cells = n;
      try {
        FlowTrace trace = run(fc);
        if (trace.stop_reason != StopReason::t_end)
          throw StudyError("run at n = " + std::to_string(n) + " stopped with reason '" +
                           to_string(trace.stop_reason) + "' before t* = " + fmt17(cfg.t_end));
        rows.push_back({n, hemisphere_solution_error(trace, cfg.s_max)});
      } catch (const std::exception& e) {
        error = e.what();
        status = 1;
        break;
      }
    }
    std::ostringstream out;
    out << "n,error\n";
    for (const auto& [n, e] : rows) out << n << "," << fmt17(e) << "\n";
    if (rows.size() >= 2) {
      std::vector<double> xs, ys;
      for (const auto& [n, e] : rows) {
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(std::max(e, 1e-300)));
      }
      out << "# fitted_order = " << fmt17(-linear_fit(xs, ys).slope) << "\n";
    }
    if (!error.empty()) out << "# study aborted: " << error << "\n";
    write_text(dir / "study_solution_error.csv", out.str());
    if (!quiet) std::cout << "wrote " << (dir / "study_solution_error.csv").string() << "\n";
  }
  return status;
}

int cmd_report(const std::string& run_dir, bool quiet) {
  LoadedRun loaded = load_run_dir(run_dir);
  if (loaded.trace.records.empty())
    throw SchemaError("trace.csv has no records; nothing to report");
  const NormalizedTrace norm = normalize_trace(loaded.trace);
  const RunReport rep = build_report(loaded.config, loaded.trace, norm);

  std::vector<double> f_delta_vals;
  for (const auto& snap : loaded.trace.snapshots) {
    const CurvatureField c = curvature(snap);
    bool positive = true;
    for (double r : c.r_scalar) positive = positive && r > 0;
    f_delta_vals.push_back(positive ? f_delta(c, loaded.config.delta).value
                                    : std::numeric_limits<double>::quiet_NaN());
  }
  const PinchingReport pin = build_pinching_report(loaded.config, loaded.trace, f_delta_vals);

  fs::path dir(run_dir);
  if (!fs::is_directory(dir)) dir = dir.parent_path();
  write_text(dir / "report.json", report_json(rep, pin).dump(2) + "\n");
  print_report(rep, quiet);
  return rep.failed() ? 1 : 0;
}

namespace {

std::vector<double> column(const std::vector<std::vector<double>>& rows, int idx) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[idx]);
  return out;
}

void write_plots(const fs::path& dir, const HarnessConfig& cfg,
                 const std::vector<std::vector<double>>& rows) {
  using plot::Series;
  const std::vector<double> t = column(rows, 0);

  {
    std::vector<Series> series{{"R_max", t, column(rows, 2)}};
    const bool hemisphere =
        cfg.preset == "round_cap" && std::abs(std::cos(cfg.s_max) / std::sin(cfg.s_max)) <= 1e-10;
    if (hemisphere) {
      std::vector<double> exact;
      for (double tv : t) exact.push_back(6.0 / (1.0 - 4.0 * tv));
      series.push_back({"6/(1-4t)", t, exact});
    }
    plot::write_svg((dir / "rmax_t.svg").string(), series,
                    {"max scalar curvature", "t", "R_max", true});
  }
  plot::write_svg((dir / "pinching_t.svg").string(),
                  {{"eps_star", t, column(rows, 6)}, {"f_max", t, column(rows, 7)}},
                  {"pinching monitors", "t", "value", false});
  {
    auto abscol = [&](int idx) {
      std::vector<double> v = column(rows, idx);
      for (double& x : v) x = std::abs(x);
      return v;
    };
    plot::write_svg((dir / "residuals_t.svg").string(),
                    {{"|i1n|", t, abscol(9)}, {"|i2n|", t, abscol(10)}, {"|i3n|", t, abscol(11)}},
                    {"boundary identity residuals", "t", "normalized residual", true});
  }
  {
    const std::vector<double> tt = column(rows, 14);
    plot::write_svg((dir / "normalized_t.svg").string(),
                    {{"kappa_tilde", tt, column(rows, 13)}, {"spread", tt, column(rows, 15)}},
                    {"normalized flow", "t_tilde", "value", false});
  }
  {
    std::vector<std::string> cols;
    std::stringstream ss(kTraceHeader);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
    plot::write_gnuplot((dir / "trace").string(), cols, rows);
  }
}

}  // namespace

int cmd_plot(const std::string& run_dir, bool quiet) {
  LoadedRun loaded = load_run_dir(run_dir);
  fs::path dir(run_dir);
  if (!fs::is_directory(dir)) dir = dir.parent_path();
  if (loaded.csv_rows.empty()) {
    std::cerr << "warning: trace is empty; nothing to plot\n";
    return 0;
  }
  write_plots(dir, loaded.config, loaded.csv_rows);
  if (!quiet) std::cout << "wrote plots to " << dir.string() << "\n";
  return 0;
}

int cmd_presets() {
  std::cout << "round_cap      phi = sin(s) on [0, s_max], s_max in (0, pi/2]; kappa = cot(s_max)\n"
            << "               params: s_max. s_max = pi/2 is the shrinking hemisphere (kappa = 0).\n"
            << "perturbed_cap  phi = sin(s)*(1 + amp*sin^4(mode*pi*s/(2 s_max))); kappa = cot(s_max)\n"
            << "               params: s_max, amp (default 0.05), mode (integer >= 1, default 2).\n"
            << "flattened_cap  phi = sin(s)*exp(-flat*sin^2(s)); kappa = cot(s_max)*(1-2*flat*sin^2(s_max))\n"
            << "               params: s_max, flat (default 0.1).\n"
            << "flat_cap       phi = s on [0, 1], kappa = 1; Ricci-flat stationary diagnostic.\n"
            << "All positive-curvature presets are screened for Ric > 0 at every node.\n";
  return 0;
}

}  // namespace riccicap::harness
