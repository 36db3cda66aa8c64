#include "riccicap/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "riccicap/errors.hpp"

namespace riccicap::plot {

namespace {

constexpr double kW = 760, kH = 480;
constexpr double kML = 80, kMR = 24, kMT = 44, kMB = 56;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_svg(const std::string& path, const std::vector<Series>& series,
               const PlotOptions& opts) {
  // collect plottable points
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!opts.log_y || y > 0);
  };
  double x0 = std::numeric_limits<double>::max(), x1 = -x0;
  double y0 = std::numeric_limits<double>::max(), y1 = -y0;
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      const double yv = opts.log_y ? std::log10(s.y[i]) : s.y[i];
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, yv);
      y1 = std::max(y1, yv);
    }
  }
  const bool empty = !(x0 <= x1);
  if (empty) {
    x0 = 0;
    x1 = 1;
    y0 = 0;
    y1 = 1;
  }
  if (x1 - x0 <= 0) x1 = x0 + 1;
  if (y1 - y0 <= 0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pw = kW - kML - kMR, ph = kH - kMT - kMB;
  auto px = [&](double x) { return kML + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kMT + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << opts.title << "</text>\n";
  out << "<rect x=\"" << kML << "\" y=\"" << kMT << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 5; ++k) {
    const double fx = x0 + (x1 - x0) * k / 5.0;
    const double fy = y0 + (y1 - y0) * k / 5.0;
    out << "<line x1=\"" << px(fx) << "\" y1=\"" << kMT + ph << "\" x2=\"" << px(fx) << "\" y2=\""
        << kMT + ph + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(fx) << "\" y=\"" << kMT + ph + 20
        << "\" text-anchor=\"middle\" font-size=\"11\">" << num(fx) << "</text>\n";
    out << "<line x1=\"" << kML - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << kML << "\" y2=\""
        << py(fy) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kML - 8 << "\" y=\"" << py(fy) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">"
        << num(opts.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  out << "<text x=\"" << kML + pw / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << opts.xlabel << "</text>\n";
  out << "<text x=\"18\" y=\"" << kMT + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " << kMT + ph / 2
      << ")\">" << opts.ylabel << (opts.log_y ? " (log)" : "") << "</text>\n";

  int idx = 0;
  for (const auto& s : series) {
    const char* color = kPalette[idx % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      const double yv = opts.log_y ? std::log10(s.y[i]) : s.y[i];
      out << num(px(s.x[i])) << "," << num(py(yv)) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << kML + 10 << "\" y=\"" << kMT + 16 + 16 * idx << "\" font-size=\"12\" fill=\""
        << color << "\">" << s.name << "</text>\n";
    ++idx;
  }
  out << "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write '" + path + "'");
  f << out.str();
}

void write_gnuplot(const std::string& stem, const std::vector<std::string>& column_names,
                   const std::vector<std::vector<double>>& rows) {
  {
    std::ofstream dat(stem + ".dat", std::ios::binary);
    if (!dat) throw InvalidInput("cannot write '" + stem + ".dat'");
    dat << "#";
    for (const auto& c : column_names) dat << " " << c;
    dat << "\n";
    char buf[48];
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
        dat << (i ? " " : "") << buf;
      }
      dat << "\n";
    }
  }
  const auto slash = stem.find_last_of("/\\");
  const std::string base = slash == std::string::npos ? stem : stem.substr(slash + 1);
  std::ofstream gp(stem + ".gp", std::ios::binary);
  if (!gp) throw InvalidInput("cannot write '" + stem + ".gp'");
  gp << "# gnuplot script for the monitor trace; columns:\n#";
  for (size_t i = 0; i < column_names.size(); ++i)
    gp << " " << (i + 1) << ":" << column_names[i];
  gp << "\nset datafile missing 'nan'\n"
     << "set terminal svg size 900,600\n"
     << "set output 'trace_gp.svg'\n"
     << "set logscale y\n"
     << "set xlabel 't'\n"
     << "plot '" << base << ".dat' using 1:3 with lines title 'R_max', \\\n"
     << "     '" << base << ".dat' using 1:6 with lines title 'volume'\n";
  gp.close();
}

}  // namespace riccicap::plot
