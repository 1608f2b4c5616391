#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <map>

#include "oracle_values.hpp"
#include "usam/metrics.hpp"
#include "usam/presets.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace usam;

TEST_CASE("freshness saturates at one and decays with the desync age") {
  SystemConfig cfg = preset_config('C');
  CHECK(freshness(cfg, 0.0) == 1.0);
  CHECK(freshness(cfg, cfg.delta_tar_ms) == 1.0);
  CHECK_THAT(freshness(cfg, 2.0 * cfg.delta_tar_ms), WithinAbs(0.5, 1e-12));
  CHECK(freshness(cfg, kInf) == 0.0);
  CHECK(std::isnan(freshness(cfg, kNaN)));
  CHECK_THROWS_AS(freshness(cfg, -1.0), std::domain_error);

  SystemConfig no_mon = cfg;
  no_mon.spec(Cls::M).is_monitoring = false;
  CHECK(freshness(no_mon, 1e9) == 1.0);
}

TEST_CASE("reliability takes the worst class after the trust discount") {
  SystemConfig cfg = preset_config('C');
  std::map<Cls, double> viol{{Cls::M, 0.0}, {Cls::SC, 0.0}, {Cls::FC, 0.0},
                             {Cls::S, 0.0}};
  CHECK(reliability(cfg, viol) == 1.0);

  viol[Cls::M] = 0.1;
  CHECK_THAT(reliability(cfg, viol), WithinAbs(0.9, 1e-12));

  SystemConfig discounted = cfg;
  discounted.spec(Cls::S).gamma = 0.8;
  CHECK_THAT(reliability(discounted, viol), WithinAbs(0.8, 1e-12));

  viol[Cls::SC] = kNaN;
  CHECK(std::isnan(reliability(cfg, viol)));

  viol.erase(Cls::FC);
  CHECK_THROWS_WITH(reliability(cfg, viol), ContainsSubstring("FC"));
}

TEST_CASE("safety decays exponentially with the worst response bound") {
  SystemConfig cfg = preset_config('C');
  CHECK_THAT(safety(cfg, 1.0), WithinRel(oracle::kSafetyDelta1, 1e-12));
  CHECK_THAT(safety(cfg, 0.23), WithinRel(oracle::kSafetyDelta023, 1e-12));
  CHECK_THAT(safety(cfg, 0.30), WithinRel(oracle::kSafetyDelta03, 1e-12));
  CHECK(safety(cfg, 0.2) < safety(cfg, 0.8));
}

TEST_CASE("geometric aggregation respects ranges, zeros and exponents") {
  CHECK(usam::usam(1.0, 1.0, 1.0, 0.34, 0.33, 0.33) == 1.0);
  CHECK(usam::usam(0.0, 1.0, 1.0, 0.34, 0.33, 0.33) == 0.0);
  CHECK(usam::usam(0.0, 0.5, 0.5, 0.0, 1.0, 1.0) == 0.25);  // zero weight ignores F
  CHECK(usam::usam(0.3, 0.4, 0.5, 0.0, 0.0, 0.0) == 1.0);
  CHECK_THAT(usam::usam(0.5, 0.5, 0.5, 1.0, 1.0, 1.0), WithinAbs(0.125, 1e-15));
  CHECK(std::isnan(usam::usam(kNaN, 0.5, 0.5, 1.0, 1.0, 1.0)));
  CHECK_THROWS_AS(usam::usam(-0.1, 0.5, 0.5, 1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(usam::usam(0.5, 1.1, 0.5, 1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(usam::usam(0.5, 0.5, 0.5, -1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("gate admits exactly the region bounded by the thresholds") {
  SystemConfig cfg = preset_config('C');
  auto th = feasibility_thresholds(cfg);

  auto g_on = gate(cfg, 0.1, th.delta_safe, 0.8);
  CHECK(g_on.feasible);
  CHECK(g_on.psi_gated == 0.8);

  auto g_below = gate(cfg, 0.1, th.delta_safe - 1e-9, 0.8);
  CHECK_FALSE(g_below.feasible);
  CHECK(g_below.psi_gated == 0.0);

  double d = 0.30;
  CHECK(gate(cfg, th.rho_safe_at(d), d, 0.8).feasible);
  CHECK_FALSE(gate(cfg, th.rho_safe_at(d) + 1e-9, d, 0.8).feasible);

  SystemConfig strict = cfg;
  strict.spec(Cls::S).sfrt_ms = 0.05;  // below any attainable bound
  CHECK_FALSE(gate(strict, 0.01, 1.0, 0.8).feasible);
}

TEST_CASE("comparison proxies anchor at their time constants") {
  auto at_tau_v = comparison_metrics(50.0);
  CHECK_THAT(at_tau_v.voi, WithinRel(oracle::kVoiAtTau, 1e-12));
  auto at_tau_c = comparison_metrics(20.0);
  CHECK_THAT(at_tau_c.aoc, WithinAbs(oracle::kAocAtTau, 1e-12));

  auto fresh = comparison_metrics(0.0);
  CHECK(fresh.voi == 1.0);
  CHECK(fresh.aoc == 1.0);

  double prev_voi = 2.0, prev_aoc = 2.0;
  for (double aoi : {0.0, 5.0, 20.0, 50.0, 200.0, 1e4}) {
    auto cm = comparison_metrics(aoi);
    CHECK(cm.voi >= 0.0);
    CHECK(cm.voi <= 1.0);
    CHECK(cm.aoc >= 0.0);
    CHECK(cm.aoc <= 1.0);
    CHECK(cm.voi < prev_voi);
    CHECK(cm.aoc < prev_aoc);
    prev_voi = cm.voi;
    prev_aoc = cm.aoc;
  }

  auto undef = comparison_metrics(kNaN);
  CHECK(std::isnan(undef.voi));
  CHECK(std::isnan(undef.aoc));
}
