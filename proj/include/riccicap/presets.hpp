#ifndef RICCICAP_PRESETS_HPP
#define RICCICAP_PRESETS_HPP

#include <map>
#include <string>

#include "riccicap/metric.hpp"

namespace riccicap {

// Initial data families. All lengths are arclength s in [0, s_max]; the
// computational grid carries rho = s_max.
//
//   round_cap      phi = sin s, kappa = cot(s_max); needs s_max <= pi/2 so
//                  that kappa >= 0. s_max = pi/2 is the shrinking hemisphere.
//   perturbed_cap  phi = sin s * (1 + amp * sin^4(mode*pi*s/(2 s_max))).
//                  The bump is even in s and has zero slope at s_max, so the
//                  profile stays smooth at the center and kappa = cot(s_max)
//                  exactly, independent of amp.
//   flattened_cap  phi = sin s * exp(-flat * sin^2 s); a genuinely different
//                  family with kappa = cot(s_max)*(1 - 2*flat*sin^2 s_max).
//   flat_cap       phi = s on [0,1], kappa = 1; the Ricci-flat stationary
//                  profile, exempt from the positivity screen (diagnostics).
//
// The three cap presets are screened for min(a,b) > 0 at every node and
// rejected otherwise, naming the offending node.
//
// params keys: s_max (all caps), amp + mode (perturbed_cap), flat
// (flattened_cap). flat_cap takes optional n-independent param none.
WarpedMetric make_preset(const std::string& name, const std::map<std::string, double>& params,
                         int n_cells);

bool preset_name_valid(const std::string& name);

}  // namespace riccicap

#endif
