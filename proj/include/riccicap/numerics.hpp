#ifndef RICCICAP_NUMERICS_HPP
#define RICCICAP_NUMERICS_HPP

#include <vector>

#include "riccicap/errors.hpp"

namespace riccicap {

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
};

// Ordinary least squares y = slope*x + intercept; needs >= 2 distinct x.
LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// Composite trapezoid with uniform spacing dx.
double trapezoid(const std::vector<double>& ys, double dx);

// Cumulative trapezoid of y over (possibly nonuniform) x, same length as x,
// starting at 0.
std::vector<double> cumulative_trapezoid(const std::vector<double>& xs,
                                         const std::vector<double>& ys);

}  // namespace riccicap

#endif
