#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "riccicap/harness.hpp"

namespace {

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"riccicap: Ricci flow on rotationally symmetric 3-balls with umbilic boundary"};
  app.require_subcommand(1);

  std::string config_path, out_dir, trace_path, n_list_text;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "integrate a preset and persist trace/snapshots/report");
  run->add_option("--config", config_path, "config file (key = value lines)")->required();
  run->add_option("--out", out_dir, "output directory (overrides config output_dir)");
  run->add_flag("--quiet", quiet, "suppress progress output");

  auto* study = app.add_subcommand("study", "grid-refinement convergence studies");
  study->add_option("--config", config_path, "config file; t_end is the sample time t*")
      ->required();
  study->add_option("--n-list", n_list_text, "comma-separated grid sizes, e.g. 64,128,256")
      ->required();
  study->add_option("--out", out_dir, "output directory (overrides config output_dir)");
  study->add_flag("--quiet", quiet, "suppress progress output");

  auto* report = app.add_subcommand("report", "regenerate report.json from a persisted run");
  report->add_option("trace", trace_path, "run directory or path to its trace.csv")->required();
  report->add_flag("--quiet", quiet, "suppress output");

  auto* plotc = app.add_subcommand("plot", "emit SVG plots and a gnuplot pair from a run");
  plotc->add_option("trace", trace_path, "run directory or path to its trace.csv")->required();
  plotc->add_flag("--quiet", quiet, "suppress output");

  auto* presets = app.add_subcommand("presets", "list initial-data presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed() || study->parsed()) {
      riccicap::harness::HarnessConfig cfg = riccicap::harness::parse_config_file(config_path);
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      if (run->parsed()) return riccicap::harness::cmd_run(cfg, quiet);
      return riccicap::harness::cmd_study(cfg, parse_n_list(n_list_text), quiet);
    }
    if (report->parsed()) return riccicap::harness::cmd_report(trace_path, quiet);
    if (plotc->parsed()) return riccicap::harness::cmd_plot(trace_path, quiet);
    if (presets->parsed()) return riccicap::harness::cmd_presets();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
