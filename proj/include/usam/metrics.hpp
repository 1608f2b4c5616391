#pragma once

// Component scores and their geometric aggregation, plus the hard
// feasibility gate and the age-based comparison proxies.

#include <cmath>
#include <map>

#include "usam/analytic.hpp"
#include "usam/model.hpp"

namespace usam {

enum class Source { simulated, asymptotic };

struct MetricReport {
  double f = kNaN;
  double r = kNaN;
  double s = kNaN;
  double psi_raw = kNaN;
  double psi_gated = kNaN;
  bool feasible = false;
  double aoi_ms = kNaN;
  double paoi_ms = kNaN;
  double aos_ms = kNaN;
  double voi = kNaN;
  double aoc = kNaN;
  Source source = Source::asymptotic;
  bool no_monitoring = false;  // f reported as 1 by convention
};

// f = min(1, delta_tar / aos).  aos = 0 is the perfectly-fresh limit, +inf
// the divergence sentinel; negative ages are a caller bug.
inline double freshness(const SystemConfig& cfg, double aos_mean_ms) {
  if (cfg.monitoring().empty()) return 1.0;
  if (std::isnan(aos_mean_ms)) return kNaN;
  if (aos_mean_ms < 0.0) throw std::domain_error("aos_mean_ms must be non-negative");
  if (aos_mean_ms == 0.0) return 1.0;
  return std::min(1.0, cfg.delta_tar_ms / aos_mean_ms);
}

// r = min over classes of (1 - viol_k) * gamma_k.  Every class must report a
// violation rate; NaN rates (undelivered classes) propagate as NaN.
inline double reliability(const SystemConfig& cfg,
                          const std::map<Cls, double>& viol_rate) {
  double worst = kInf;
  bool saw_nan = false;
  for (Cls k : kAllCls) {
    auto it = viol_rate.find(k);
    if (it == viol_rate.end())
      throw std::invalid_argument(std::string("viol_rate missing for class ") +
                                  name(k));
    if (std::isnan(it->second)) {
      saw_nan = true;
      continue;
    }
    worst = std::min(worst, (1.0 - it->second) * cfg.spec(k).gamma);
  }
  return saw_nan ? kNaN : worst;
}

// s = exp(-max_k B_k(delta) / sfrt_star).
inline double safety(const SystemConfig& cfg, double delta) {
  double worst = 0.0;
  for (Cls k : kAllCls) worst = std::max(worst, wcrt_bound(cfg, k, delta));
  return std::exp(-worst / cfg.sfrt_star_ms);
}

inline double usam(double f, double r, double s, double w1, double w2, double w3) {
  auto in01 = [](double v) { return std::isnan(v) || (v >= 0.0 && v <= 1.0); };
  if (!in01(f) || !in01(r) || !in01(s))
    throw std::domain_error("usam components must lie in [0,1]");
  if (!(w1 >= 0.0 && w2 >= 0.0 && w3 >= 0.0))
    throw std::domain_error("usam weights must be non-negative");
  return powz(f, w1) * powz(r, w2) * powz(s, w3);
}

struct GateResult {
  bool feasible = false;
  double psi_gated = 0.0;
};

// Feasible iff the duty clears the safe threshold, the load clears the
// duty-dependent cap, and every class meets its own response budget.
inline GateResult gate(const SystemConfig& cfg, double rho, double delta,
                       double psi_raw) {
  auto th = feasibility_thresholds(cfg);
  bool ok = delta >= th.delta_safe && rho <= th.rho_safe_at(delta);
  for (Cls k : kAllCls)
    ok = ok && wcrt_bound(cfg, k, delta) <= cfg.spec(k).sfrt_ms;
  return {ok, ok ? psi_raw : 0.0};
}

struct ComparisonMetrics {
  double voi = kNaN;
  double aoc = kNaN;
};

// Freshness proxies used for side-by-side comparison only; they never feed
// the aggregated score.
inline ComparisonMetrics comparison_metrics(double aoi_ms, double tau_v_ms = 50.0,
                                            double tau_c_ms = 20.0) {
  ComparisonMetrics out;
  out.voi = std::exp(-aoi_ms / tau_v_ms);
  out.aoc = 1.0 / (1.0 + (aoi_ms / tau_c_ms) * (aoi_ms / tau_c_ms));
  return out;
}

}  // namespace usam
