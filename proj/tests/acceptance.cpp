// Acceptance suite: exact-solution regressions plus property checks of the
// flow (preservation, blow-up, boundary identities, normalized convergence).
// Prints one pass/fail line per criterion; exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "riccicap/boundary.hpp"
#include "riccicap/harness.hpp"
#include "riccicap/numerics.hpp"
#include "riccicap/pinching.hpp"
#include "riccicap/presets.hpp"

using namespace riccicap;
using harness::HarnessConfig;
constexpr double kPi = std::numbers::pi;

namespace {

struct Suite {
  int fails = 0;
  void criterion(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d. %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    if (!ok) ++fails;
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

HarnessConfig hemi_cfg(int n) {
  HarnessConfig c;
  c.preset = "round_cap";
  c.s_max = kPi / 2;
  c.n_cells = n;
  return c;
}

// the three perturbed presets of the suite, all kappa >= 0, eps*(0) in [0.15, 0.33)
std::vector<HarnessConfig> perturbed_suite(int n) {
  HarnessConfig p1;
  p1.preset = "perturbed_cap";
  p1.s_max = kPi / 3;
  p1.amp = 0.05;
  p1.mode = 1;
  p1.n_cells = n;

  HarnessConfig p2;
  p2.preset = "perturbed_cap";
  p2.s_max = kPi / 4;
  p2.amp = 0.05;
  p2.mode = 1;
  p2.n_cells = n;

  HarnessConfig p3;
  p3.preset = "flattened_cap";
  p3.s_max = kPi / 3;
  p3.flat = 0.25;
  p3.n_cells = n;
  p3.r_stop = 2000;  // starts at R_max = 15: keep two decades for the pinch fit
  return {p1, p2, p3};
}

std::map<std::string, harness::RunArtifacts> g_cache;

const harness::RunArtifacts& cached_run(const std::string& key, const HarnessConfig& cfg) {
  auto it = g_cache.find(key);
  if (it == g_cache.end()) it = g_cache.emplace(key, harness::execute_run(cfg)).first;
  return it->second;
}

double fit_final_third_log_slope(const NormalizedTrace& norm) {
  const int n = static_cast<int>(norm.records.size());
  std::vector<double> xs, ys;
  for (int i = 2 * n / 3; i < n; ++i) {
    if (norm.records[i].spread > 0) {
      xs.push_back(norm.records[i].t_tilde);
      ys.push_back(std::log(norm.records[i].spread));
    }
  }
  return linear_fit(xs, ys).slope;
}

}  // namespace

int main() {
  Suite suite;
  const auto wall0 = std::chrono::steady_clock::now();

  // ---- 1. exact shrinking hemisphere --------------------------------------
  {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& art = cached_run("hemi-256", hemi_cfg(256));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double law = 0;
    for (const auto& r : art.trace.records)
      if (r.t <= 0.2) law = std::max(law, std::abs(r.r_max * (1.0 - 4.0 * r.t) / 6.0 - 1.0));
    const double stop_rel = std::abs(art.trace.t_stop - 0.25) / 0.25;
    const bool ok = art.trace.stop_reason == StopReason::blow_up && law <= 0.01 &&
                    stop_rel <= 0.01 && seconds < 30.0;
    suite.criterion(1, "exact shrinking hemisphere",
                    ok,
                    "max |R_max(1-4t)/6 - 1| = " + fmt(law) + " (tol 0.01); stop t = " +
                        fmt(art.trace.t_stop) + " vs 1/4 (rel " + fmt(stop_rel) +
                        ", tol 0.01); runtime " + fmt(seconds) + " s (< 30)");
  }

  // ---- 2. convergence order at t = 0.1 ------------------------------------
  {
    std::vector<double> errs;
    for (int n : {64, 128, 256}) {
      HarnessConfig c = hemi_cfg(n);
      c.t_end = 0.1;
      errs.push_back(
          harness::hemisphere_solution_error(cached_run("hemi-t01-" + std::to_string(n), c).trace,
                                             kPi / 2));
    }
    const double q1 = errs[0] / errs[1], q2 = errs[1] / errs[2];
    suite.criterion(2, "hemisphere error drops >= 3.5x per grid doubling", q1 >= 3.5 && q2 >= 3.5,
                    "e(64)=" + fmt(errs[0]) + " e(128)=" + fmt(errs[1]) + " e(256)=" +
                        fmt(errs[2]) + "; ratios " + fmt(q1) + ", " + fmt(q2));
  }

  // ---- 3. positivity and eps-pinching on the perturbed suite --------------
  {
    bool ok = true;
    std::ostringstream detail;
    int idx = 0;
    for (const auto& cfg : perturbed_suite(256)) {
      const auto& art = cached_run(cfg.preset + "-" + fmt(cfg.s_max) + "-256", cfg);
      const auto& recs = art.trace.records;
      const double eps0 = recs.front().eps_star.value_or(-1);
      bool in_window = eps0 >= 0.15 && eps0 < 0.33;
      double pos_margin = 1e300, eps_margin = 1e300;
      for (const auto& r : recs) {
        pos_margin = std::min(pos_margin, r.ric_min + 1e-3 * r.r_max);
        eps_margin = std::min(eps_margin, r.eps_star.value_or(-1) - (eps0 - 1e-3));
      }
      const bool reached = art.trace.stop_reason == StopReason::blow_up;
      ok = ok && in_window && pos_margin > 0 && eps_margin >= 0 && reached;
      ++idx;
      detail << (idx > 1 ? "; " : "") << cfg.preset << "[" << idx << "]: eps0=" << fmt(eps0)
             << " pos_margin=" << fmt(pos_margin) << " eps_margin=" << fmt(eps_margin);
    }
    suite.criterion(3, "Ric > 0 and eps* preserved to R_max = 1e3", ok, detail.str());
  }

  // ---- 4. finite-time blow-up, stop times stable under refinement ---------
  {
    bool ok = true;
    std::ostringstream detail;
    std::vector<std::pair<std::string, HarnessConfig>> presets{{"hemi", hemi_cfg(256)}};
    int k = 1;
    for (const auto& cfg : perturbed_suite(256))
      presets.push_back({"P" + std::to_string(k++), cfg});
    bool first = true;
    for (auto& [name, cfg] : presets) {
      const auto& a256 = cached_run(name == "hemi" ? "hemi-256"
                                                   : cfg.preset + "-" + fmt(cfg.s_max) + "-256",
                                    cfg);
      HarnessConfig c128 = cfg;
      c128.n_cells = 128;
      const auto& a128 = cached_run(name + "-128", c128);
      const bool blew = a256.trace.stop_reason == StopReason::blow_up &&
                        a128.trace.stop_reason == StopReason::blow_up;
      const double rel =
          std::abs(a128.trace.t_stop - a256.trace.t_stop) / a256.trace.t_stop;
      ok = ok && blew && rel <= 0.02;
      detail << (first ? "" : "; ") << name << ": t=" << fmt(a256.trace.t_stop) << " rel_diff="
             << fmt(rel);
      first = false;
    }
    suite.criterion(4, "blow-up reached, stop times agree within 2% (n=128 vs 256)", ok,
                    detail.str());
  }

  // ---- 5. boundary identities ----------------------------------------------
  {
    FlowConfig fc = perturbed_suite(256)[0].flow();
    fc.t_end = 0.05;
    const IdentityStudy study = identity_convergence_study(fc, {64, 128, 256});
    bool ratios_ok = true;
    for (int k = 1; k < 3; ++k) {
      ratios_ok = ratios_ok &&
                  std::abs(study.rows[k - 1].i1n) / std::abs(study.rows[k].i1n) >= 3.0 &&
                  std::abs(study.rows[k - 1].i2n) / std::abs(study.rows[k].i2n) >= 3.0 &&
                  std::abs(study.rows[k - 1].i3n) / std::abs(study.rows[k].i3n) >= 3.0;
    }
    double algebra = 0;
    for (const auto& [key, art] : g_cache)
      for (const auto& r : art.trace.records)
        algebra = std::max(algebra, std::abs(r.i3n - (r.i1n + 2.0 * r.i2n)));
    double i2_hemi = 0;
    for (const auto& r : cached_run("hemi-256", hemi_cfg(256)).trace.records)
      i2_hemi = std::max(i2_hemi, std::abs(r.i2n));
    const bool ok = ratios_ok && algebra <= 1e-12 && i2_hemi <= 1e-6;
    suite.criterion(5, "boundary identity residuals: O(dx^2), exact algebra, kappa=0 case", ok,
                    "orders (" + fmt(study.order_i1) + ", " + fmt(study.order_i2) + ", " +
                        fmt(study.order_i3) + "); max |i3n-(i1n+2i2n)| = " + fmt(algebra) +
                        " (tol 1e-12); hemisphere max |i2n| = " + fmt(i2_hemi) + " (tol 1e-6)");
  }

  // ---- 6. f = S/R^2 bounded away from 1 ------------------------------------
  {
    bool ok = true;
    std::ostringstream detail;
    std::vector<std::pair<std::string, const harness::RunArtifacts*>> suite_runs;
    suite_runs.push_back({"hemi", &cached_run("hemi-256", hemi_cfg(256))});
    int k = 1;
    for (const auto& cfg : perturbed_suite(256))
      suite_runs.push_back({"P" + std::to_string(k++),
                            &cached_run(cfg.preset + "-" + fmt(cfg.s_max) + "-256", cfg)});
    bool first = true;
    for (const auto& [name, art] : suite_runs) {
      const double f0 = art->trace.records.front().f_max.value_or(2.0);
      double fmax = 0;
      for (const auto& r : art->trace.records) fmax = std::max(fmax, r.f_max.value_or(2.0));
      const double bound = std::max(f0 + 0.02, 0.9);
      ok = ok && fmax <= bound;
      detail << (first ? "" : "; ") << name << ": max f = " << fmt(fmax) << " (bound " +
                    fmt(bound) + ")";
      first = false;
    }
    suite.criterion(6, "f stays bounded away from 1 over the preset suite", ok, detail.str());
  }

  // ---- 7. delta-pinch power law --------------------------------------------
  {
    bool ok = true;
    std::ostringstream detail;
    int k = 1;
    for (const auto& cfg : perturbed_suite(256)) {
      const auto& art = cached_run(cfg.preset + "-" + fmt(cfg.s_max) + "-256", cfg);
      try {
        const DeltaPinchFit fit = delta_pinch_fit(art.trace);
        const bool this_ok = fit.identically_zero || fit.slope <= 2.0 - 0.01;
        ok = ok && this_ok;
        detail << "P" << k << ": slope = " << fmt(fit.slope) << " (tol 1.99); ";
      } catch (const FitWindowError& e) {
        ok = false;
        detail << "P" << k << ": " << e.what() << "; ";
      }
      ++k;
    }
    // manufactured-data fitter pin
    FlowTrace synth;
    for (int i = 0; i < 60; ++i) {
      FlowRecord r;
      r.t = i;
      r.r_max = std::pow(10.0, 3.0 * i / 59.0);
      r.pinch_gap_max = std::pow(r.r_max, 1.9);
      synth.records.push_back(r);
    }
    const double recovered = delta_pinch_fit(synth).slope;
    ok = ok && std::abs(recovered - 1.9) <= 1e-6;
    detail << "fitter recovers 1.9 -> " + fmt(recovered);
    suite.criterion(7, "S - R^2/3 grows slower than R^2 (slope <= 1.99)", ok, detail.str());
  }

  // ---- 8. normalized convergence -------------------------------------------
  {
    bool ok = true;
    std::ostringstream detail;
    int k = 1;
    for (const auto& cfg : perturbed_suite(256)) {
      const auto& art = cached_run(cfg.preset + "-" + fmt(cfg.s_max) + "-256", cfg);
      if (art.trace.records.front().kappa <= 1e-10) continue;  // kappa > 0 presets only
      const NormalizedTrace& norm = art.norm;
      const int n = static_cast<int>(norm.records.size());
      const int from = 2 * n / 3;
      double kt_inc = -1e300, sp_inc = -1e300, sp_window = 0;
      for (int i = from; i < n; ++i) sp_window = std::max(sp_window, norm.records[i].spread);
      for (int i = from + 1; i < n; ++i) {
        kt_inc = std::max(kt_inc, norm.records[i].kappa_tilde - norm.records[i - 1].kappa_tilde);
        sp_inc = std::max(sp_inc, norm.records[i].spread - norm.records[i - 1].spread);
      }
      const double slope = fit_final_third_log_slope(norm);
      const bool this_ok = kt_inc <= 1e-14 * norm.records.front().kappa_tilde &&
                           sp_inc <= 1e-3 * sp_window && slope < 0;
      ok = ok && this_ok;
      detail << "P" << k << ": kt_inc=" << fmt(kt_inc) << " sp_inc=" << fmt(sp_inc)
             << " log-slope=" << fmt(slope) << "; ";
      ++k;
    }
    const auto& hemi = cached_run("hemi-256", hemi_cfg(256));
    double spread_max = 0, kt_max = 0, rt_drift = 0;
    const double rt0 = hemi.norm.records.front().r_tilde;
    for (const auto& r : hemi.norm.records) {
      spread_max = std::max(spread_max, std::abs(r.spread));
      kt_max = std::max(kt_max, std::abs(r.kappa_tilde));
      rt_drift = std::max(rt_drift, std::abs(r.r_tilde - rt0) / rt0);
    }
    const bool hemi_ok = spread_max <= 1e-6 && kt_max <= 1e-6 && rt_drift <= 1e-6;
    ok = ok && hemi_ok;
    detail << "hemisphere stationary: spread=" << fmt(spread_max) << " ktilde=" << fmt(kt_max)
           << " rtilde_drift=" << fmt(rt_drift) << " (tol 1e-6)";
    suite.criterion(8, "normalized flow: kappa_tilde and spread decay; hemisphere stationary", ok,
                    detail.str());
  }

  // ---- 9. formula-level checks ----------------------------------------------
  {
    bool ok = true;
    for (double eps : {0.0, 2.0, 4.0}) {
      const double direct = h_sign(eps / 2.0, eps / 2.0);
      const double poly = -eps * eps * eps + 3 * eps * eps - eps - 2;
      ok = ok && direct == poly && h_constrained_max(eps) == poly;
    }
    ok = ok && std::abs(boundary_f_normal_derivative({3, 3, 3}, 1.7)) < 1e-14;
    ok = ok && boundary_f_normal_derivative({1, 1, 10}, 1.0) < 0;
    ok = ok && boundary_f_normal_derivative({10, 10, 1}, 1.0) < 0;
    double fd_gap = 0;
    for (double a : {0.5, 1.0, 2.0})
      for (double b : {0.7, 1.5, 3.0}) {
        CurvatureField c;
        c.a = {a};
        c.b = {b};
        c.k_rad = {a / 2};
        c.k_sph = {b - a / 2};
        c.r_scalar = {a + 2 * b};
        c.s_norm = {a * a + 2 * b * b};
        fd_gap = std::max(fd_gap, std::abs(f_delta(c, 0.0).value - (f_ratio(c).value - 1.0 / 3.0)));
      }
    ok = ok && fd_gap <= 1e-14;
    suite.criterion(9, "h(eps/2,eps/2) polynomial, grad_nu f signs, f_delta(0) = f - 1/3", ok,
                    "h checked at eps in {0,2,4}; f_delta gap = " + fmt(fd_gap));
  }

  // ---- 10. gradient functional stability ------------------------------------
  {
    bool ok = true;
    std::ostringstream detail;
    std::vector<std::pair<std::string, HarnessConfig>> presets{{"hemi", hemi_cfg(256)}};
    int k = 1;
    for (const auto& cfg : perturbed_suite(256))
      presets.push_back({"P" + std::to_string(k++), cfg});
    for (auto& [name, cfg] : presets) {
      const auto& a256 = cached_run(name == "hemi" ? "hemi-256"
                                                   : cfg.preset + "-" + fmt(cfg.s_max) + "-256",
                                    cfg);
      HarnessConfig c128 = cfg;
      c128.n_cells = 128;
      const auto& a128 = cached_run(name + "-128", c128);
      const auto g256 = gradient_ratio(a256.trace, {0.1, 0.05});
      const auto g128 = gradient_ratio(a128.trace, {0.1, 0.05});
      for (size_t i = 0; i < g256.size(); ++i) {
        const double c1 = g256[i].c, c2 = g128[i].c;
        const bool stable = std::isfinite(c1) && std::isfinite(c2) &&
                            (std::max(c1, c2) <= 1e-6 ||
                             std::abs(c1 - c2) <= 0.10 * std::max(c1, c2));
        ok = ok && stable;
        detail << name << "/theta=" << fmt(g256[i].theta) << ": C=" << fmt(c1) << " vs "
               << fmt(c2) << "; ";
      }
    }
    suite.criterion(10, "C(theta) finite and stable within 10% under grid doubling", ok,
                    detail.str());
  }

  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  std::printf("%d/10 criteria passed (%.1f s total)\n", 10 - suite.fails, total);
  return suite.fails;
}
