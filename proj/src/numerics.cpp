#include "riccicap/numerics.hpp"

#include <cmath>

namespace riccicap {

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t n = xs.size();
  if (n != ys.size() || n < 2) throw InvalidInput("linear_fit: need >= 2 paired samples");
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InvalidInput("linear_fit: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double ss_res = 0;
    for (size_t i = 0; i < n; ++i) {
      const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
      ss_res += r * r;
    }
    fit.slope_stderr = std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

double trapezoid(const std::vector<double>& ys, double dx) {
  if (ys.size() < 2) throw InvalidInput("trapezoid: need >= 2 samples");
  double sum = 0.5 * (ys.front() + ys.back());
  for (size_t i = 1; i + 1 < ys.size(); ++i) sum += ys[i];
  return sum * dx;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& xs,
                                         const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.empty())
    throw InvalidInput("cumulative_trapezoid: mismatched or empty inputs");
  std::vector<double> out(xs.size(), 0.0);
  for (size_t i = 1; i < xs.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
  return out;
}

}  // namespace riccicap
