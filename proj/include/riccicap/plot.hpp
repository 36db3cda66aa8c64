#ifndef RICCICAP_PLOT_HPP
#define RICCICAP_PLOT_HPP

#include <string>
#include <vector>

namespace riccicap::plot {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

struct PlotOptions {
  std::string title, xlabel, ylabel;
  bool log_y = false;
};

// Minimal static SVG line plot (axes box, ticks, legend, one polyline per
// series). Non-finite samples are dropped; log_y drops nonpositive samples.
void write_svg(const std::string& path, const std::vector<Series>& series,
               const PlotOptions& opts);

// Companion gnuplot pair: <stem>.dat (whitespace table) + <stem>.gp.
void write_gnuplot(const std::string& stem, const std::vector<std::string>& column_names,
                   const std::vector<std::vector<double>>& rows);

}  // namespace riccicap::plot

#endif
