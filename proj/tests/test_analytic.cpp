#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "oracle_values.hpp"
#include "usam/analytic.hpp"
#include "usam/presets.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace usam;

TEST_CASE("powz treats a zero exponent as one, even at base zero") {
  CHECK(powz(0.0, 0.0) == 1.0);
  CHECK(powz(0.0, 2.0) == 0.0);
  CHECK(powz(2.0, 0.0) == 1.0);
  CHECK(powz(0.5, 0.33) == std::pow(0.5, 0.33));
}

TEST_CASE("base response bounds sum the higher-priority interference") {
  SystemConfig cfg = preset_config('C');
  CHECK(wcrt_base(cfg, Cls::M) == oracle::kWcrtBaseM);
  CHECK(wcrt_base(cfg, Cls::SC) == oracle::kWcrtBaseSC);
  CHECK(wcrt_base(cfg, Cls::FC) == oracle::kWcrtBaseFC);
  CHECK(wcrt_base(cfg, Cls::S) == oracle::kWcrtBaseS);
}

TEST_CASE("duty-dependent response bound is affine and decreasing in duty") {
  SystemConfig cfg = preset_config('C');
  CHECK(wcrt_bound(cfg, Cls::M, 0.23) == oracle::kWcrtBoundM023);
  CHECK(wcrt_bound(cfg, Cls::M, 0.30) == oracle::kWcrtBoundM030);
  CHECK(wcrt_bound(cfg, Cls::M, 1.00) == oracle::kWcrtBoundM100);
  double prev = kInf;
  for (double d = 0.0; d <= 1.0; d += 0.05) {
    double b = wcrt_bound(cfg, Cls::M, d);
    CHECK_THAT(b, WithinAbs(cfg.v_max_ms * (1.0 - d) + wcrt_base(cfg, Cls::M), 1e-12));
    CHECK(b <= prev);
    prev = b;
  }
  CHECK_THROWS_AS(wcrt_bound(cfg, Cls::M, -0.1), std::domain_error);
  CHECK_THROWS_AS(wcrt_bound(cfg, Cls::M, 1.1), std::domain_error);
}

TEST_CASE("slack holds for every class across the whole duty range") {
  SystemConfig cfg = preset_config('C');
  for (Cls k : kAllCls) {
    CHECK(slack_ok(cfg, k, 0.0));
    CHECK(slack_ok(cfg, k, 1.0));
  }
  SystemConfig tight = cfg;
  tight.spec(Cls::S).deadline_ms = 1.0;  // below the delta=0 bound of 1.6
  CHECK_FALSE(slack_ok(tight, Cls::S, 0.0));
  CHECK(slack_ok(tight, Cls::S, 1.0));  // bound 0.1 at full duty
}

TEST_CASE("feasibility thresholds match hand-computed values") {
  SystemConfig cfg = preset_config('C');
  auto th = feasibility_thresholds(cfg);
  CHECK_THAT(th.delta_queue, WithinAbs(oracle::kDeltaQueue, 1e-15));
  CHECK(th.delta_wcrt == oracle::kDeltaWcrt);
  CHECK_THAT(th.delta_safe, WithinAbs(oracle::kDeltaSafe, 1e-15));
  CHECK_THAT(th.rho_safe_coeff, WithinRel(oracle::kRhoSafeCoeff, 1e-12));
  CHECK_THAT(th.rho_safe_at(0.30), WithinRel(oracle::kRhoSafeAt030, 1e-12));
  CHECK_THAT(th.rho_safe_at(0.24), WithinRel(oracle::kRhoSafeAt024, 1e-12));
  CHECK(th.rho_safe_at(0.9) == 1.0);  // clamped
}

TEST_CASE("thresholds respond to parameter mutations as derived") {
  SystemConfig cfg = preset_config('C');
  SystemConfig slow = cfg;
  slow.mu = 500.0;
  CHECK_THAT(feasibility_thresholds(slow).delta_queue, WithinAbs(0.336, 1e-15));
  SystemConfig tight = cfg;
  tight.alpha = 1.0;
  CHECK_THAT(feasibility_thresholds(tight).delta_safe, WithinAbs(0.168, 1e-15));
}

TEST_CASE("a binding deadline lifts the duty floor and zeroes low-duty load") {
  SystemConfig cfg = preset_config('C');
  cfg.spec(Cls::S).deadline_ms = 1.0;
  auto th = feasibility_thresholds(cfg);
  // 1 - (D - base)/v_max = 1 - 0.9/1.5
  CHECK_THAT(th.delta_wcrt, WithinAbs(0.4, 1e-12));
  CHECK(th.rho_safe_at(0.39) == 0.0);
  CHECK(th.rho_safe_at(0.41) > 0.0);
  CHECK(th.delta_safe >= th.delta_wcrt);
}

TEST_CASE("asymptotic desync age follows the update-cycle formula") {
  SystemConfig cfg = preset_config('C');
  CHECK_THAT(aos_mean_asymptotic(cfg, 0.1, 0.3),
             WithinRel(oracle::kAosRho01Delta03, 1e-12));
  CHECK_THAT(aos_mean_asymptotic(cfg, 0.001, 0.3),
             WithinRel(oracle::kAosRho0001Delta03, 1e-12));
  std::array<double, kNumCls> wq{2.0, 0.0, 0.0, 0.0};
  CHECK_THAT(aos_mean_asymptotic(cfg, 0.1, 0.3, wq),
             WithinRel(oracle::kAosRho01Delta03WqM2, 1e-12));

  CHECK(std::isinf(aos_mean_asymptotic(cfg, 0.0, 0.3)));

  std::array<double, kNumCls> wq_nan{kNaN, 0.0, 0.0, 0.0};
  CHECK(std::isnan(aos_mean_asymptotic(cfg, 0.1, 0.3, wq_nan)));

  SystemConfig no_mon = cfg;
  no_mon.spec(Cls::M).is_monitoring = false;
  CHECK(std::isinf(aos_mean_asymptotic(no_mon, 0.1, 0.3)));
}

TEST_CASE("asymptotic component limits match hand-computed values") {
  SystemConfig cfg = preset_config('C');
  auto a = asymptotic_components(cfg, 0.1, 0.23);
  CHECK(a.gamma_min == 1.0);
  CHECK_THAT(a.s_comp, WithinRel(oracle::kSafetyDelta023, 1e-12));
  CHECK_THAT(a.psi_limit, WithinRel(oracle::kPsiLimitRho01Delta023, 1e-12));

  auto b = asymptotic_components(cfg, 0.1, 0.30);
  CHECK_THAT(b.s_comp, WithinRel(oracle::kSafetyDelta03, 1e-12));
  CHECK_THAT(b.psi_limit, WithinRel(oracle::kPsiLimitRho01Delta03, 1e-12));

  auto c = asymptotic_components(cfg, 0.001, 0.30);
  CHECK_THAT(c.psi_limit, WithinRel(oracle::kPsiLimitRho0001Delta03, 1e-12));

  auto d = asymptotic_components(cfg, 0.01, 0.30);
  CHECK_THAT(d.f0, WithinRel(oracle::kF0Rho001Delta03, 1e-12));

  auto e = asymptotic_components(cfg, 0.0, 0.30);
  CHECK(e.f0 == 0.0);  // diverging age drives freshness to zero

  SystemConfig no_mon = cfg;
  no_mon.spec(Cls::M).is_monitoring = false;
  auto f = asymptotic_components(no_mon, 0.1, 0.30);
  CHECK(f.no_monitoring);
  CHECK(f.f0 == 1.0);
}

TEST_CASE("asymptotic freshness is monotone in rho and in delta") {
  SystemConfig cfg = preset_config('C');
  double prev = -1.0;
  for (double rho : {0.001, 0.01, 0.05, 0.1, 0.3}) {
    double f = asymptotic_components(cfg, rho, 0.3).f0;
    CHECK(f >= prev);
    prev = f;
  }
  prev = -1.0;
  for (double d : {0.05, 0.1, 0.3, 0.6, 1.0}) {
    double f = asymptotic_components(cfg, 0.005, d).f0;
    CHECK(f >= prev);
    prev = f;
  }
}
