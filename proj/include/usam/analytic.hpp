#pragma once

// Closed-form side of the model: worst-case response bounds under
// preemptive-resume fixed priorities, duty-cycle feasibility thresholds,
// and the light-traffic limits of the aggregated metric.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "usam/model.hpp"

namespace usam {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// pow with the 0^0 := 1 convention pinned explicitly.
inline double powz(double base, double expo) {
  return expo == 0.0 ? 1.0 : std::pow(base, expo);
}

// Busy-interference part of the worst-case response: one maximal-size job of
// every higher-priority class plus the job's own maximal demand.
inline double wcrt_base(const SystemConfig& cfg, Cls k) {
  double sum = 0.0;
  for (Cls i : hp(cfg, k)) sum += cfg.spec(i).c_max_ms;
  return sum + cfg.spec(k).c_max_ms;
}

// Full bound: worst receiver-activation delay plus the interference part.
inline double wcrt_bound(const SystemConfig& cfg, Cls k, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0))
    throw std::domain_error("delta must lie in [0,1]");
  return cfg.v_max_ms * (1.0 - delta) + wcrt_base(cfg, k);
}

// Deterministic slack: deadline strictly above the response bound.
inline bool slack_ok(const SystemConfig& cfg, Cls k, double delta) {
  return cfg.spec(k).deadline_ms > wcrt_bound(cfg, k, delta);
}

struct FeasibilityThresholds {
  double delta_queue = 0.0;  // queue-stability floor rho_max*lambda_s/(eps*mu)
  double delta_wcrt = 0.0;   // smallest duty with deterministic slack everywhere
  double delta_safe = 0.0;   // max(delta_wcrt, alpha*delta_queue)
  double rho_safe_coeff = 0.0;

  // Largest admissible rho at a given duty; zero below the wcrt floor.
  double rho_safe_at(double delta) const {
    if (delta < delta_wcrt) return 0.0;
    return std::clamp(rho_safe_coeff * delta, 0.0, 1.0);
  }
};

inline FeasibilityThresholds feasibility_thresholds(const SystemConfig& cfg) {
  FeasibilityThresholds th;
  th.delta_queue = cfg.rho_max * cfg.lambda_s / (cfg.epsilon * cfg.mu);
  for (Cls k : kAllCls) {
    double d = 1.0 - (cfg.spec(k).deadline_ms - wcrt_base(cfg, k)) / cfg.v_max_ms;
    th.delta_wcrt = std::max(th.delta_wcrt, std::max(d, 0.0));
  }
  th.delta_safe = std::max(th.delta_wcrt, cfg.alpha * th.delta_queue);
  th.rho_safe_coeff = cfg.epsilon * cfg.mu / (cfg.alpha * cfg.lambda_s);
  return th;
}

// Mean age of the monitored state on the update-cycle scale:
//   max over monitoring classes of 1/lambda_k + wq_k/2 + 1/(mu*delta), in ms.
// Diverges (+inf) when rho is zero or no class is monitored; callers treat
// that as "freshness impossible", never as a silent zero age.
inline double aos_mean_asymptotic(const SystemConfig& cfg, double rho, double delta,
                                  const std::optional<std::array<double, kNumCls>>& wq_ms =
                                      std::nullopt) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::domain_error("delta must lie in (0,1]");
  auto lam = arrival_rates(cfg, rho);  // validates rho
  double worst = -kInf;
  bool any = false;
  for (Cls k : kAllCls) {
    const auto& cs = cfg.spec(k);
    if (!cs.is_monitoring) continue;
    any = true;
    double gen = lam[idx(k)] > 0.0 ? kMsPerSec / lam[idx(k)] : kInf;
    double wq = wq_ms ? (*wq_ms)[idx(k)] : 0.0;
    // A zero arrival rate diverges no matter what was (not) measured; an
    // unmeasured queueing mean at positive rate must not vanish in the max.
    double term = std::isinf(gen)
                      ? kInf
                      : gen + wq / 2.0 + kMsPerSec / (cfg.mu * delta);
    if (std::isnan(term)) return term;
    worst = std::max(worst, term);
  }
  return any ? worst : kInf;
}

struct AsymptoticComponents {
  double f0 = 0.0;
  double gamma_min = 0.0;
  double s_comp = 0.0;
  double psi_limit = 0.0;
  bool no_monitoring = false;  // f0 forced to 1 by convention
};

inline AsymptoticComponents asymptotic_components(const SystemConfig& cfg, double rho,
                                                  double delta) {
  AsymptoticComponents out;
  double aos = aos_mean_asymptotic(cfg, rho, delta);
  out.no_monitoring = cfg.monitoring().empty();
  out.f0 = out.no_monitoring ? 1.0 : std::min(1.0, cfg.delta_tar_ms / aos);
  out.gamma_min = kInf;
  double worst_bound = 0.0;
  for (Cls k : kAllCls) {
    out.gamma_min = std::min(out.gamma_min, cfg.spec(k).gamma);
    worst_bound = std::max(worst_bound, wcrt_bound(cfg, k, delta));
  }
  out.s_comp = std::exp(-worst_bound / cfg.sfrt_star_ms);
  out.psi_limit = powz(out.f0, cfg.w1) * powz(out.gamma_min, cfg.w2) *
                  powz(out.s_comp, cfg.w3);
  return out;
}

}  // namespace usam
