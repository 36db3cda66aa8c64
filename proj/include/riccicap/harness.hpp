#ifndef RICCICAP_HARNESS_HPP
#define RICCICAP_HARNESS_HPP

#include <string>
#include <vector>

#include "riccicap/flow.hpp"
#include "riccicap/pinching.hpp"

namespace riccicap::harness {

// Plain-text config: one "key = value" per line, '#' comments, unknown keys
// rejected. Defaults are documented in parse_config's dispatch table.
struct HarnessConfig {
  std::string preset;  // required
  double s_max = 0;    // required for the cap presets
  double amp = 0.05;   // perturbed_cap
  double mode = 2;     // perturbed_cap, integer >= 1
  double flat = 0.1;   // flattened_cap

  int n_cells = 256;
  double cfl = 0.25;
  double t_end = -1;   // < 0 means none
  double r_stop = 1000;
  int record_every = 20;

  double delta = -1;   // f_delta exponent; < 0 means auto = min(0.1, 2*eps0^2)
  std::vector<double> thetas = {0.1, 0.05};
  bool monitor_identities = true;
  bool monitor_pinching = true;

  double origin_tol = 1e-3;
  double boundary_tol = 1e-10;
  double dissipation = kRhoDissipationDefault;

  std::string output_dir = "out";
  bool emit_csv = true;
  bool emit_json = true;
  bool emit_plots = false;

  bool operator==(const HarnessConfig&) const = default;

  FlowConfig flow() const;
};

HarnessConfig parse_config(const std::string& text);
HarnessConfig parse_config_file(const std::string& path);
std::string serialize_config(const HarnessConfig& cfg);

// One measured property with its threshold. kind distinguishes properties the
// flow is expected to exhibit ("analytic property") from pinned solver
// regressions ("regression target"). status: pass | fail | skip.
struct Verdict {
  std::string name;
  std::string kind;
  std::string status;
  double measured = 0;
  double tolerance = 0;
  std::string detail;
  int rec_from = 0, rec_to = 0;  // record range the verdict was computed from
};

struct RunReport {
  std::string stop_reason;
  double t_stop = 0;
  long steps = 0;
  std::vector<Verdict> verdicts;
  // provenance
  HarnessConfig config_echo;  // with resolved delta
  int n_cells = 0;
  std::string defaults_version;
  bool failed() const;
};

struct RunArtifacts {
  HarnessConfig config;  // resolved (delta filled in)
  FlowTrace trace;
  NormalizedTrace norm;
  std::vector<double> f_delta_max;  // per record, at the resolved delta
  RunReport report;
};

// Core of cmd_run without filesystem I/O; acceptance reuses it.
RunArtifacts execute_run(const HarnessConfig& cfg);

// Assembled verdict list for a finished run (also used by cmd_report).
RunReport build_report(const HarnessConfig& cfg, const FlowTrace& trace,
                       const NormalizedTrace& norm);

PinchingReport build_pinching_report(const HarnessConfig& cfg, const FlowTrace& trace,
                                     const std::vector<double>& f_delta_max);

// ---- persistence ------------------------------------------------------

// trace.csv columns, exactly:
//   t, dt, R_max, R_min, ric_min, volume, eps_star, f_max, f_delta_max,
//   i1n, i2n, i3n, h_margin, kappa_tilde, t_tilde, spread_norm
extern const char* const kTraceHeader;

void write_run_dir(const std::string& dir, const RunArtifacts& art, bool quiet);

struct LoadedRun {
  HarnessConfig config;
  FlowTrace trace;     // records rebuilt from snapshots, dt from the CSV
  std::vector<std::vector<double>> csv_rows;  // raw columns, for plotting
};
// Strict schema validation; errors name the offending file/row/column.
LoadedRun load_run_dir(const std::string& dir_or_trace_csv);

// ---- subcommands (exit status semantics: 0 ok, 1 failure) -------------

// max-node error of (rho, phi) at the trace's final time against the exact
// shrinking solution sqrt(1-4t)*(s_max, sin s), normalized by sqrt(1-4t).
double hemisphere_solution_error(const FlowTrace& trace, double s_max);

int cmd_run(const HarnessConfig& cfg, bool quiet);
int cmd_study(const HarnessConfig& cfg, const std::vector<int>& n_list, bool quiet);
int cmd_report(const std::string& run_dir, bool quiet);
int cmd_plot(const std::string& run_dir, bool quiet);
int cmd_presets();

}  // namespace riccicap::harness

#endif
