#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "riccicap/harness.hpp"
#include "riccicap/presets.hpp"

using namespace riccicap;
using namespace riccicap::harness;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "riccicap_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

HarnessConfig flat_config(const fs::path& out) {
  HarnessConfig cfg;
  cfg.preset = "flat_cap";
  cfg.n_cells = 64;
  cfg.t_end = 0.02;
  cfg.output_dir = out.string();
  return cfg;
}

}  // namespace

TEST_CASE("parse_config: defaults require a preset") {
  CHECK_THROWS_WITH_AS(parse_config(""), doctest::Contains("preset"), InvalidInput);
}

TEST_CASE("parse_config: realized kappa for a pi/3 cap") {
  const HarnessConfig cfg = parse_config("preset = round_cap\ns_max = 1.0471975512");
  CHECK(cfg.n_cells == 256);       // documented defaults
  CHECK(cfg.cfl == 0.25);
  CHECK(cfg.r_stop == 1000.0);
  CHECK(cfg.record_every == 20);
  const WarpedMetric m = make_preset(cfg.preset, cfg.flow().preset_params, 64);
  CHECK(m.kappa == doctest::Approx(0.5773502691896257).epsilon(1e-9));
}

TEST_CASE("parse_config: rejections name the line and key") {
  CHECK_THROWS_WITH_AS(parse_config("preset = flat_cap\ncfl = 0.9"),
                       doctest::Contains("(0, 0.5]"), InvalidInput);
  CHECK_THROWS_WITH_AS(parse_config("preset = flat_cap\nbogus_key = 1"),
                       doctest::Contains("unknown key 'bogus_key'"), InvalidInput);
  CHECK_THROWS_WITH_AS(parse_config("preset = flat_cap\nn_cells = few"),
                       doctest::Contains("line 2"), InvalidInput);
  CHECK_THROWS_WITH_AS(parse_config("preset = flat_cap\npreset = round_cap"),
                       doctest::Contains("duplicate"), InvalidInput);
  CHECK_THROWS_AS(parse_config("preset = round_cap"), InvalidInput);  // s_max missing
  CHECK_THROWS_AS(parse_config("preset = flat_cap\nthetas = 0.5,1.5"), InvalidInput);
}

TEST_CASE("parse_config / serialize_config round trip") {
  HarnessConfig a;
  a.preset = "perturbed_cap";
  a.s_max = kPi / 3;
  a.amp = 0.07;
  a.mode = 3;
  a.n_cells = 128;
  a.cfl = 0.2;
  a.t_end = 0.05;
  a.delta = 0.08;
  a.thetas = {0.2, 0.1, 0.05};
  a.output_dir = "runs/x";
  a.emit_plots = true;
  CHECK(parse_config(serialize_config(a)) == a);

  HarnessConfig b;  // all defaults, auto delta, no t_end
  b.preset = "flat_cap";
  CHECK(parse_config(serialize_config(b)) == b);

  // comments and blank lines are tolerated
  const HarnessConfig c = parse_config("# comment\n\npreset = flat_cap # trailing\n");
  CHECK(c.preset == "flat_cap");
}

TEST_CASE("cmd_run: flat cap writes schema-complete artifacts and passes") {
  const fs::path dir = fresh_dir("run_flat");
  const HarnessConfig cfg = flat_config(dir);
  CHECK(cmd_run(cfg, true) == 0);

  REQUIRE(fs::exists(dir / "trace.csv"));
  REQUIRE(fs::exists(dir / "report.json"));
  REQUIRE(fs::exists(dir / "config_echo.cfg"));

  const std::string csv = slurp(dir / "trace.csv");
  CHECK(csv.rfind(std::string(kTraceHeader) + "\n", 0) == 0);
  // one snapshot file per data row
  const size_t rows = std::count(csv.begin(), csv.end(), '\n') - 1;
  size_t snaps = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "snapshots")) ++snaps;
  CHECK(snaps == rows);

  const std::string report = slurp(dir / "report.json");
  CHECK(report.find("\"stationary\"") != std::string::npos);
  CHECK(report.find("\"stop_reason\": \"t_end\"") != std::string::npos);
}

TEST_CASE("cmd_run: determinism (same config, byte-identical outputs)") {
  const fs::path dir = fresh_dir("run_det");
  const HarnessConfig cfg = flat_config(dir);
  REQUIRE(cmd_run(cfg, true) == 0);
  const std::string csv1 = slurp(dir / "trace.csv");
  const std::string rep1 = slurp(dir / "report.json");
  REQUIRE(cmd_run(cfg, true) == 0);
  CHECK(slurp(dir / "trace.csv") == csv1);
  CHECK(slurp(dir / "report.json") == rep1);
}

TEST_CASE("cmd_report: regenerates byte-identical verdicts from the persisted trace") {
  const fs::path dir = fresh_dir("run_report");
  REQUIRE(cmd_run(flat_config(dir), true) == 0);
  const std::string original = slurp(dir / "report.json");
  fs::remove(dir / "report.json");
  REQUIRE(cmd_report(dir.string(), true) == 0);
  CHECK(slurp(dir / "report.json") == original);
  // accepts the trace.csv path spelling too
  REQUIRE(cmd_report((dir / "trace.csv").string(), true) == 0);
  CHECK(slurp(dir / "report.json") == original);
}

TEST_CASE("cmd_report: schema violations name the offending row") {
  const fs::path dir = fresh_dir("run_truncated");
  REQUIRE(cmd_run(flat_config(dir), true) == 0);

  // truncate the last row to 3 columns
  std::stringstream fixed;
  std::istringstream in(slurp(dir / "trace.csv"));
  std::string line, prev;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() >= 3);
  const size_t bad_row = lines.size() - 1;
  lines[bad_row] = "0.5,0.1,nan";
  for (const auto& l : lines) fixed << l << "\n";
  std::ofstream(dir / "trace.csv", std::ios::binary) << fixed.str();

  try {
    cmd_report(dir.string(), true);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("row " + std::to_string(bad_row)) != std::string::npos);
  }

  // header corruption is caught as well
  lines[0] = "t,dt,oops";
  std::stringstream fixed2;
  for (size_t i = 0; i < lines.size() - 1; ++i) fixed2 << lines[i] << "\n";
  std::ofstream(dir / "trace.csv", std::ios::binary) << fixed2.str();
  CHECK_THROWS_AS(cmd_report(dir.string(), true), SchemaError);
}

TEST_CASE("cmd_report: delta-pinch verdict is 'skip', not 'fail', without range") {
  const fs::path dir = fresh_dir("run_skiprange");
  REQUIRE(cmd_run(flat_config(dir), true) == 0);  // flat: R_max never grows
  const std::string report = slurp(dir / "report.json");
  const auto pos = report.find("delta_pinch_slope");
  REQUIRE(pos != std::string::npos);
  CHECK(report.find("insufficient range", pos) != std::string::npos);
  CHECK(report.find("\"status\": \"skip\"", pos) != std::string::npos);
}

TEST_CASE("cmd_plot: emits SVGs and a gnuplot pair; empty traces warn only") {
  const fs::path dir = fresh_dir("run_plot");
  HarnessConfig cfg = flat_config(dir);
  REQUIRE(cmd_run(cfg, true) == 0);
  REQUIRE(cmd_plot(dir.string(), true) == 0);
  for (const char* f : {"rmax_t.svg", "pinching_t.svg", "residuals_t.svg", "normalized_t.svg"}) {
    REQUIRE(fs::exists(dir / f));
    CHECK(slurp(dir / f).find("<svg") != std::string::npos);
  }
  CHECK(fs::exists(dir / "trace.dat"));
  CHECK(fs::exists(dir / "trace.gp"));

  const fs::path empty = fresh_dir("run_plot_empty");
  std::ofstream(empty / "trace.csv", std::ios::binary) << kTraceHeader << "\n";
  std::ofstream(empty / "config_echo.cfg", std::ios::binary) << serialize_config(cfg);
  fs::create_directories(empty / "snapshots");
  CHECK(cmd_plot(empty.string(), true) == 0);
  CHECK(!fs::exists(empty / "rmax_t.svg"));
}

TEST_CASE("eps verdict flags initial pinching at or above the 1/4 threshold") {
  HarnessConfig cfg;
  cfg.preset = "round_cap";
  cfg.s_max = kPi / 2;
  cfg.n_cells = 64;
  cfg.t_end = 0.01;
  const RunArtifacts art = execute_run(cfg);  // eps*(0) = 1/3
  bool found = false;
  for (const auto& v : art.report.verdicts)
    if (v.name == "eps_pinch_preserved") {
      found = true;
      CHECK(v.detail.find("outside the guaranteed preservation cone") != std::string::npos);
    }
  CHECK(found);
}

TEST_CASE("cmd_plot: hemisphere R_max plot carries the closed-form overlay") {
  const fs::path dir = fresh_dir("run_plot_hemi");
  HarnessConfig cfg;
  cfg.preset = "round_cap";
  cfg.s_max = kPi / 2;
  cfg.n_cells = 64;
  cfg.t_end = 0.02;
  cfg.output_dir = dir.string();
  REQUIRE(cmd_run(cfg, true) == 0);
  REQUIRE(cmd_plot(dir.string(), true) == 0);
  const std::string svg = slurp(dir / "rmax_t.svg");
  CHECK(svg.find("R_max") != std::string::npos);
  CHECK(svg.find("6/(1-4t)") != std::string::npos);
}

TEST_CASE("cmd_study: solution-error order ~2 on the hemisphere; short lists rejected") {
  const fs::path dir = fresh_dir("study_hemi");
  HarnessConfig cfg;
  cfg.preset = "round_cap";
  cfg.s_max = kPi / 2;
  cfg.t_end = 0.01;
  cfg.output_dir = dir.string();

  CHECK_THROWS_AS(cmd_study(cfg, {24, 48}, true), InvalidInput);
  CHECK_THROWS_AS(cmd_study(cfg, {48, 24, 96}, true), InvalidInput);

  REQUIRE(cmd_study(cfg, {24, 48, 96}, true) == 0);
  const std::string err_csv = slurp(dir / "study_solution_error.csv");
  CHECK(err_csv.rfind("n,error\n", 0) == 0);
  const auto pos = err_csv.find("# fitted_order = ");
  REQUIRE(pos != std::string::npos);
  const double order = std::stod(err_csv.substr(pos + 17));
  CHECK(order > 1.4);   // at least the scheme's formal order...
  CHECK(order < 4.5);   // ...and superconvergent ranges are fine too
  CHECK(fs::exists(dir / "study_identity_residuals.csv"));
}

TEST_CASE("cmd_study: aborted runs preserve partial results") {
  const fs::path dir = fresh_dir("study_abort");
  HarnessConfig cfg;
  cfg.preset = "round_cap";
  cfg.s_max = kPi / 3;
  cfg.t_end = 0.5;    // unreachable
  cfg.r_stop = 10.0;  // blow-up hits first
  cfg.output_dir = dir.string();
  CHECK(cmd_study(cfg, {24, 48, 96}, true) == 1);
  const std::string csv = slurp(dir / "study_identity_residuals.csv");
  CHECK(csv.find("# study aborted:") != std::string::npos);
}
