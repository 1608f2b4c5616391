#pragma once

// Experiment drivers: single-point analysis, parameter sweeps and the
// feasibility phase scan, each with CSV/SVG artifact writers.

#include <filesystem>
#include <future>
#include <string>
#include <vector>

#include "usam/csv.hpp"
#include "usam/metrics.hpp"
#include "usam/simulator.hpp"
#include "usam/svg.hpp"

namespace usam {

struct AnalyzeOptions {
  Source mode = Source::asymptotic;
  int reps = 5;
  double horizon_s = 300.0;
  double warmup_frac = 0.05;
  std::uint64_t seed = 12345;
};

struct AnalyzeResult {
  MetricReport report;
  FeasibilityThresholds thresholds;
  SweepRow row;
  ReplicateResult sim;  // populated in simulated mode only
};

namespace detail {

// Simulated-mode component scores from one summary.  Freshness is evaluated
// on the update-cycle age scale with the *measured* per-class queueing
// means; the sample-path ages stay observational (aoi/paoi/aos columns and
// the VoI/AoC proxies) since at light load the sample-path desync age is
// near zero no matter how stale the update cycle is.
inline MetricReport report_from_summary(const SystemConfig& cfg, double rho,
                                        double delta, const SimSummary& sum) {
  MetricReport rep;
  rep.source = Source::simulated;
  rep.no_monitoring = cfg.monitoring().empty();
  std::array<double, kNumCls> wq{};
  std::map<Cls, double> viol;
  for (int k = 0; k < kNumCls; ++k) {
    wq[k] = sum.cls[k].wq_mean;
    viol[kAllCls[k]] = sum.cls[k].viol_rate;
  }
  rep.f = freshness(cfg, aos_mean_asymptotic(cfg, rho, delta, wq));
  rep.r = reliability(cfg, viol);
  rep.s = safety(cfg, delta);
  rep.psi_raw = usam(rep.f, rep.r, rep.s, cfg.w1, cfg.w2, cfg.w3);
  auto g = gate(cfg, rho, delta, rep.psi_raw);
  rep.feasible = g.feasible;
  rep.psi_gated = g.psi_gated;
  rep.aoi_ms = sum.aoi_ms;
  rep.paoi_ms = sum.paoi_ms;
  rep.aos_ms = sum.aos_ms;
  auto cm = comparison_metrics(sum.aoi_ms);
  rep.voi = cm.voi;
  rep.aoc = cm.aoc;
  return rep;
}

}  // namespace detail

inline AnalyzeResult analyze(const SystemConfig& cfg, double rho, double delta,
                             const AnalyzeOptions& opts) {
  AnalyzeResult out;
  out.thresholds = feasibility_thresholds(cfg);
  SweepRow& row = out.row;
  row.rho = rho;
  row.delta = delta;
  row.mode = opts.mode;

  if (opts.mode == Source::asymptotic) {
    auto comp = asymptotic_components(cfg, rho, delta);
    MetricReport& rep = out.report;
    rep.source = Source::asymptotic;
    rep.no_monitoring = comp.no_monitoring;
    rep.f = comp.f0;
    rep.r = comp.gamma_min;
    rep.s = comp.s_comp;
    rep.psi_raw = comp.psi_limit;
    auto g = gate(cfg, rho, delta, rep.psi_raw);
    rep.feasible = g.feasible;
    rep.psi_gated = g.psi_gated;
    // Light-traffic ages collapse onto the same update-cycle scale.
    rep.aos_ms = aos_mean_asymptotic(cfg, rho, delta);
    rep.aoi_ms = rep.aos_ms;
    rep.paoi_ms = rep.aos_ms;
    auto cm = comparison_metrics(rep.aoi_ms);
    rep.voi = cm.voi;
    rep.aoc = cm.aoc;
    for (int k = 0; k < kNumCls; ++k)
      row.viol[k] = slack_ok(cfg, kAllCls[k], delta) ? 0.0 : kNaN;
    row.wq_mean_ms = 0.0;
    row.t_max_ms = kNaN;
    row.realized_duty = delta;
    row.reps = 0;
    row.ci_psi = kNaN;
  } else {
    SimOptions so;
    so.rho = rho;
    so.delta = delta;
    so.horizon_ms = opts.horizon_s * kMsPerSec;
    so.warmup_frac = opts.warmup_frac;
    so.seed = opts.seed;
    out.sim = replicate(cfg, so, opts.reps);
    out.report = detail::report_from_summary(cfg, rho, delta, out.sim.agg);
    std::vector<double> psis;
    for (const auto& r : out.sim.reps)
      psis.push_back(detail::report_from_summary(cfg, rho, delta, r).psi_raw);
    row.ci_psi = detail::ci_halfwidth(psis);
    for (int k = 0; k < kNumCls; ++k) row.viol[k] = out.sim.agg.cls[k].viol_rate;
    row.wq_mean_ms = out.sim.agg.wq_mean_ms;
    row.t_max_ms = out.sim.agg.t_max_ms;
    row.realized_duty = out.sim.agg.realized_duty;
    row.reps = opts.reps;
  }

  const MetricReport& rep = out.report;
  row.f = rep.f;
  row.r = rep.r;
  row.s = rep.s;
  row.psi_raw = rep.psi_raw;
  row.psi_gated = rep.psi_gated;
  row.feasible = rep.feasible;
  row.aoi_ms = rep.aoi_ms;
  row.paoi_ms = rep.paoi_ms;
  row.aos_ms = rep.aos_ms;
  row.voi = rep.voi;
  row.aoc = rep.aoc;
  return out;
}

struct SweepSpec {
  enum class Var { delta, rho } var = Var::delta;
  double from = 0.05;
  double to = 0.6;
  int steps = 23;
  double fixed = 0.1;  // the non-swept coordinate
  AnalyzeOptions opts;
};

// Inclusive grid whose printed endpoints are exactly `from` and `to`.
inline std::vector<double> sweep_grid(double from, double to, int steps) {
  if (steps < 1) throw std::domain_error("steps must be >= 1");
  if (!(from <= to)) throw std::domain_error("sweep range needs from <= to");
  std::vector<double> xs(steps);
  for (int i = 0; i < steps; ++i)
    xs[i] = (i == steps - 1) ? to : from + i * (to - from) / (steps - 1);
  if (steps == 1) xs[0] = from;
  return xs;
}

// Every grid point reuses the same base seed; points are independent model
// configurations, and common random numbers keep curves smooth.  Points run
// concurrently but rows come back in grid order.
inline std::vector<SweepRow> sweep(const SystemConfig& cfg, const SweepSpec& spec) {
  auto xs = sweep_grid(spec.from, spec.to, spec.steps);
  std::vector<std::future<SweepRow>> futs;
  futs.reserve(xs.size());
  for (double x : xs) {
    double rho = spec.var == SweepSpec::Var::rho ? x : spec.fixed;
    double delta = spec.var == SweepSpec::Var::delta ? x : spec.fixed;
    futs.push_back(std::async(std::launch::async, [&cfg, &spec, rho, delta] {
      return analyze(cfg, rho, delta, spec.opts).row;
    }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(xs.size());
  for (auto& f : futs) rows.push_back(f.get());
  return rows;
}

struct GridSpec {
  double from = 0.0;
  double to = 1.0;
  int steps = 30;
};

// Region labels come from the closed-form thresholds alone.
inline std::vector<PhaseCell> phase(const SystemConfig& cfg, const GridSpec& dgrid,
                                    const GridSpec& rgrid) {
  auto th = feasibility_thresholds(cfg);
  std::vector<PhaseCell> cells;
  for (double d : sweep_grid(dgrid.from, dgrid.to, dgrid.steps)) {
    for (double r : sweep_grid(rgrid.from, rgrid.to, rgrid.steps)) {
      PhaseCell c{d, r, "feasible"};
      if (d < th.delta_safe)
        c.region = "safety-infeasible";
      else if (r > th.rho_safe_at(d))
        c.region = "queue-limited";
      cells.push_back(c);
    }
  }
  return cells;
}

inline void ensure_outdir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

struct SweepArtifacts {
  std::string csv_path;
  std::string svg_path;
};

inline SweepArtifacts write_sweep_outputs(const SystemConfig& cfg,
                                          const SweepSpec& spec,
                                          const std::vector<SweepRow>& rows,
                                          const std::string& outdir,
                                          bool with_svg = true) {
  ensure_outdir(outdir);
  const bool is_delta = spec.var == SweepSpec::Var::delta;
  SweepArtifacts art;
  art.csv_path = outdir + "/sweep_" + (is_delta ? "delta" : "rho") + ".csv";
  write_rows(art.csv_path, rows);
  if (!with_svg) return art;
  auto th = feasibility_thresholds(cfg);
  double rule = is_delta ? th.delta_safe : th.rho_safe_at(spec.fixed);
  std::string label = std::string(is_delta ? "delta_safe=" : "rho_safe=") +
                      fmt_grid(rule);
  art.svg_path = outdir + "/sweep_" + (is_delta ? "delta" : "rho") + ".svg";
  std::ofstream f(art.svg_path);
  if (!f) throw IoError("cannot open for writing: " + art.svg_path);
  // Render from the file just written, not the in-memory rows, so the plot
  // depends only on the CSV content.
  f << render_sweep_svg(read_rows(art.csv_path), is_delta, rule, label);
  if (!f.good()) throw IoError("failed writing: " + art.svg_path);
  return art;
}

inline SweepArtifacts write_phase_outputs(const SystemConfig& cfg,
                                          const std::vector<PhaseCell>& cells,
                                          const std::string& outdir,
                                          bool with_svg = true) {
  ensure_outdir(outdir);
  SweepArtifacts art;
  art.csv_path = outdir + "/phase.csv";
  write_phase(art.csv_path, cells);
  if (!with_svg) return art;
  auto th = feasibility_thresholds(cfg);
  art.svg_path = outdir + "/phase.svg";
  std::ofstream f(art.svg_path);
  if (!f) throw IoError("cannot open for writing: " + art.svg_path);
  f << render_phase_svg(read_phase(art.csv_path), th.delta_safe, th.rho_safe_coeff);
  if (!f.good()) throw IoError("failed writing: " + art.svg_path);
  return art;
}

}  // namespace usam
