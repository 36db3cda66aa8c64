#include "riccicap/presets.hpp"

#include <cmath>
#include <numbers>

#include "riccicap/curvature.hpp"

namespace riccicap {

namespace {

double require_param(const std::map<std::string, double>& params, const std::string& key,
                     const std::string& preset) {
  auto it = params.find(key);
  if (it == params.end())
    throw InvalidInput("make_preset: preset '" + preset + "' needs parameter '" + key + "'");
  return it->second;
}

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void check_s_max(double s_max) {
  if (!(s_max > 0.0 && s_max < std::numbers::pi))
    throw InvalidInput("make_preset: s_max must lie in (0, pi)");
}

// min(a,b) > 0 at every node, else reject naming the offending node.
void positivity_screen(const WarpedMetric& m, const std::string& preset) {
  const CurvatureField c = curvature(m);
  for (int i = 0; i < c.n_nodes(); ++i) {
    const double ric_min = std::min(c.a[i], c.b[i]);
    if (!(ric_min > 0.0))
      throw PresetRejected("make_preset: preset '" + preset +
                           "' rejected: Ric > 0 violated at node " + std::to_string(i) +
                           " (min eigenvalue " + std::to_string(ric_min) + ")");
  }
}

}  // namespace

bool preset_name_valid(const std::string& name) {
  return name == "round_cap" || name == "perturbed_cap" || name == "flattened_cap" ||
         name == "flat_cap";
}

WarpedMetric make_preset(const std::string& name, const std::map<std::string, double>& params,
                         int n_cells) {
  if (!preset_name_valid(name))
    throw InvalidInput("make_preset: unknown preset '" + name +
                       "' (round_cap | perturbed_cap | flattened_cap | flat_cap)");

  if (name == "flat_cap") {
    // phi = s on [0,1]: Ricci-flat, stationary, kappa = 1
    WarpedMetric m = from_profile(n_cells, 1.0, [](double s) { return s; }, 1.0);
    check_metric(m);
    return m;
  }

  const double s_max = require_param(params, "s_max", name);
  check_s_max(s_max);

  WarpedMetric m;
  if (name == "round_cap") {
    const double kappa = std::cos(s_max) / std::sin(s_max);
    if (kappa < 0.0)
      throw InvalidInput(
          "make_preset: round_cap with s_max > pi/2 realizes kappa = cot(s_max) < 0; "
          "the boundary constant must be >= 0");
    m = from_profile(n_cells, s_max, [](double s) { return std::sin(s); }, kappa);
  } else if (name == "perturbed_cap") {
    const double amp = param_or(params, "amp", 0.05);
    const double mode = param_or(params, "mode", 2.0);
    if (mode < 1.0 || mode != std::floor(mode))
      throw InvalidInput("make_preset: perturbed_cap mode must be an integer >= 1");
    // even bump vanishing to 4th order at the center (keeps the center
    // curvature at 1 for any amp) with zero slope at s_max: kappa stays
    // cot(s_max) exactly
    const double c = mode * std::numbers::pi / (2.0 * s_max);
    const double kappa = std::cos(s_max) / std::sin(s_max);
    if (kappa < 0.0)
      throw InvalidInput("make_preset: perturbed_cap needs s_max <= pi/2 so kappa >= 0");
    m = from_profile(
        n_cells, s_max,
        [amp, c](double s) {
          const double p = std::sin(c * s) * std::sin(c * s);
          return std::sin(s) * (1.0 + amp * p * p);
        },
        kappa);
  } else {  // flattened_cap
    const double flat = param_or(params, "flat", 0.1);
    const double sL = std::sin(s_max);
    const double kappa = std::cos(s_max) / sL * (1.0 - 2.0 * flat * sL * sL);
    if (kappa < 0.0)
      throw InvalidInput("make_preset: flattened_cap parameters realize kappa < 0");
    m = from_profile(
        n_cells, s_max,
        [flat](double s) {
          const double sn = std::sin(s);
          return sn * std::exp(-flat * sn * sn);
        },
        kappa);
  }

  check_metric(m);
  positivity_screen(m, name);
  return m;
}

}  // namespace riccicap
