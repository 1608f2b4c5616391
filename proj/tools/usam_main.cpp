// usam: analyze a single operating point, sweep duty/traffic grids, map the
// feasibility phase diagram, or run the self-validation suite.
//
// Exit codes: 0 success, 1 validation failure, 2 config error, 3 I/O error.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "usam/harness.hpp"
#include "usam/presets.hpp"
#include "usam/validation.hpp"

namespace {

struct GlobalArgs {
  std::string out_dir = "out";
  std::string config_path;
  std::string preset = "C";
};

usam::SystemConfig resolve_config(const GlobalArgs& g) {
  if (!g.config_path.empty()) return usam::load_config(g.config_path);
  return usam::preset_config(g.preset[0]);
}

bool parse_grid(const std::string& s, usam::GridSpec& out) {
  double a = 0.0, b = 0.0;
  int n = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || n < 1) return false;
  out = {a, b, n};
  return true;
}

void print_report(const usam::SystemConfig& cfg, double rho, double delta,
                  const usam::AnalyzeResult& res) {
  const auto& r = res.report;
  const auto& th = res.thresholds;
  std::printf("mode            %s\n",
              r.source == usam::Source::simulated ? "sim" : "asym");
  std::printf("rho             %.6g\n", rho);
  std::printf("delta           %.6g\n", delta);
  std::printf("utilization     %.6g\n", usam::utilization(cfg, rho, delta));
  std::printf("delta_queue     %.6g\n", th.delta_queue);
  std::printf("delta_wcrt      %.6g\n", th.delta_wcrt);
  std::printf("delta_safe      %.6g\n", th.delta_safe);
  std::printf("rho_safe(delta) %.6g\n", th.rho_safe_at(delta));
  std::printf("F               %.6g\n", r.f);
  std::printf("R               %.6g\n", r.r);
  std::printf("S               %.6g\n", r.s);
  std::printf("psi_raw         %.6g\n", r.psi_raw);
  std::printf("psi_gated       %.6g\n", r.psi_gated);
  std::printf("feasible        %s\n", r.feasible ? "yes" : "no");
  std::printf("aoi_ms          %.6g\n", r.aoi_ms);
  std::printf("paoi_ms         %.6g\n", r.paoi_ms);
  std::printf("aos_ms          %.6g\n", r.aos_ms);
  std::printf("voi             %.6g\n", r.voi);
  std::printf("aoc             %.6g\n", r.aoc);
  std::printf("wq_mean_ms      %.6g\n", res.row.wq_mean_ms);
  std::printf("realized_duty   %.6g\n", res.row.realized_duty);
  if (r.source == usam::Source::simulated) {
    std::printf("reps            %d\n", res.row.reps);
    std::printf("ci_psi          %.6g\n", res.row.ci_psi);
  }
  if (r.no_monitoring)
    std::printf("note            no monitoring traffic; freshness fixed at 1\n");
}

}  // namespace

int main(int argc, char** argv) {
  GlobalArgs g;
  CLI::App app{"unified safety-age metric simulator and analytic engine"};
  app.require_subcommand(1);
  app.add_option("--out", g.out_dir, "output directory for CSV/SVG artifacts")
      ->capture_default_str();
  app.add_option("--config", g.config_path, "system configuration file (TOML)");
  app.add_option("--preset", g.preset, "bundled preset when no --config is given")
      ->check(CLI::IsMember({"A", "B", "C", "D"}))
      ->capture_default_str();

  usam::AnalyzeOptions aopts;
  std::string mode = "sim";
  double rho = 0.1, delta = 0.3;
  std::string dump_events;

  auto* analyze_cmd = app.add_subcommand("analyze", "metrics at one (rho, delta)");
  analyze_cmd->fallthrough();
  analyze_cmd->add_option("--rho", rho, "traffic intensity in [0,1]")->required();
  analyze_cmd->add_option("--delta", delta, "receiver duty cycle in (0,1]")
      ->required();
  analyze_cmd->add_option("--mode", mode, "sim or asym")
      ->check(CLI::IsMember({"sim", "asym"}))
      ->capture_default_str();
  analyze_cmd->add_option("--reps", aopts.reps, "simulation replications")
      ->capture_default_str();
  analyze_cmd->add_option("--horizon-s", aopts.horizon_s, "horizon per replication, seconds")
      ->capture_default_str();
  analyze_cmd->add_option("--warmup-frac", aopts.warmup_frac, "fraction of horizon discarded")
      ->capture_default_str();
  analyze_cmd->add_option("--seed", aopts.seed, "base RNG seed")
      ->capture_default_str();
  analyze_cmd->add_option("--dump-events", dump_events,
                          "also write a per-packet event log to this file");

  usam::SweepSpec sspec;
  std::string var = "delta";
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one variable, fix the other");
  sweep_cmd->fallthrough();
  sweep_cmd->add_option("--var", var, "delta or rho")
      ->check(CLI::IsMember({"delta", "rho"}))
      ->capture_default_str();
  sweep_cmd->add_option("--from", sspec.from, "grid start")->capture_default_str();
  sweep_cmd->add_option("--to", sspec.to, "grid end")->capture_default_str();
  sweep_cmd->add_option("--steps", sspec.steps, "grid points")->capture_default_str();
  auto* fixed_opt =
      sweep_cmd->add_option("--fixed", sspec.fixed,
                            "value of the other variable (default: rho 0.1 for "
                            "delta sweeps, delta 0.30 for rho sweeps)");
  sweep_cmd->add_option("--mode", mode, "sim or asym")
      ->check(CLI::IsMember({"sim", "asym"}))
      ->capture_default_str();
  sweep_cmd->add_option("--reps", aopts.reps, "simulation replications")
      ->capture_default_str();
  sweep_cmd->add_option("--horizon-s", aopts.horizon_s, "horizon per replication, seconds")
      ->capture_default_str();
  sweep_cmd->add_option("--warmup-frac", aopts.warmup_frac, "fraction of horizon discarded")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", aopts.seed, "base RNG seed")->capture_default_str();

  std::string dgrid_s = "0.05:0.6:30", rgrid_s = "0:1:30";
  auto* phase_cmd = app.add_subcommand("phase", "feasibility region map");
  phase_cmd->fallthrough();
  phase_cmd->add_option("--delta-grid", dgrid_s, "duty grid as from:to:steps")
      ->capture_default_str();
  phase_cmd->add_option("--rho-grid", rgrid_s, "traffic grid as from:to:steps")
      ->capture_default_str();

  auto* validate_cmd = app.add_subcommand("validate", "run the acceptance checks");
  validate_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    usam::SystemConfig cfg = resolve_config(g);

    if (*analyze_cmd) {
      aopts.mode = mode == "sim" ? usam::Source::simulated : usam::Source::asymptotic;
      auto res = usam::analyze(cfg, rho, delta, aopts);
      print_report(cfg, rho, delta, res);
      usam::ensure_outdir(g.out_dir);
      usam::write_rows(g.out_dir + "/analyze.csv", {res.row});
      std::printf("wrote %s/analyze.csv\n", g.out_dir.c_str());
      if (!dump_events.empty()) {
        usam::SimOptions so;
        so.rho = rho;
        so.delta = delta;
        so.horizon_ms = aopts.horizon_s * usam::kMsPerSec;
        so.warmup_frac = aopts.warmup_frac;
        so.seed = aopts.seed;
        so.record_packets = true;
        auto one = usam::run(cfg, so);
        usam::write_event_log(dump_events, one.delivered);
        std::printf("wrote %s (%zu delivered packets, single run)\n",
                    dump_events.c_str(), one.delivered.size());
      }
      return 0;
    }

    if (*sweep_cmd) {
      sspec.var = var == "delta" ? usam::SweepSpec::Var::delta
                                 : usam::SweepSpec::Var::rho;
      if (fixed_opt->count() == 0)
        sspec.fixed = sspec.var == usam::SweepSpec::Var::delta ? 0.1 : 0.30;
      aopts.mode = mode == "sim" ? usam::Source::simulated : usam::Source::asymptotic;
      sspec.opts = aopts;
      auto rows = usam::sweep(cfg, sspec);
      auto art = usam::write_sweep_outputs(cfg, sspec, rows, g.out_dir);
      std::printf("wrote %s\nwrote %s\n", art.csv_path.c_str(), art.svg_path.c_str());
      return 0;
    }

    if (*phase_cmd) {
      usam::GridSpec dg, rg;
      if (!parse_grid(dgrid_s, dg) || !parse_grid(rgrid_s, rg))
        throw usam::ConfigError("grid must be from:to:steps with steps >= 1");
      auto cells = usam::phase(cfg, dg, rg);
      auto art = usam::write_phase_outputs(cfg, cells, g.out_dir);
      std::printf("wrote %s\nwrote %s\n", art.csv_path.c_str(), art.svg_path.c_str());
      return 0;
    }

    if (*validate_cmd) {
      usam::ValidateOptions vo;
      vo.artifact_dir = g.out_dir + "/validate";
      auto results = usam::run_acceptance_checks(vo);
      return usam::report_checks(results, stdout);
    }
  } catch (const usam::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const usam::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
