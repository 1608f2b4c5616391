#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "oracle_values.hpp"
#include "usam/harness.hpp"
#include "usam/presets.hpp"
#include "usam/validation.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using namespace usam;

namespace {

namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const char* tag) {
  fs::path d = fs::temp_directory_path() / (std::string("usam_test_") + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + USAM_CLI_PATH + "\" " + args +
                    " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  REQUIRE(st != -1);
  return WEXITSTATUS(st);
}

}  // namespace

TEST_CASE("sweep grids hit both endpoints exactly") {
  auto xs = sweep_grid(0.05, 0.6, 23);
  REQUIRE(xs.size() == 23);
  CHECK(xs.front() == 0.05);
  CHECK(xs.back() == 0.6);
  for (size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] > xs[i - 1]);
  CHECK(sweep_grid(0.3, 0.9, 1) == std::vector<double>{0.3});
  CHECK_THROWS_AS(sweep_grid(0.9, 0.3, 5), std::domain_error);
}

TEST_CASE("csv header and cell formats match the published schema") {
  CHECK(std::string(kCsvHeader) ==
        "rho,delta,mode,F,R,S,psi_raw,psi_gated,feasible,aoi_ms,paoi_ms,aos_ms,"
        "voi,aoc,viol_M,viol_SC,viol_FC,viol_S,wq_mean_ms,t_max_ms,"
        "realized_duty,reps,ci_psi");

  SweepRow r;
  r.rho = 0.1;
  r.delta = 0.22;
  r.mode = Source::asymptotic;
  r.f = 1.0 / 3.0;
  r.feasible = true;
  r.aoi_ms = kInf;
  std::string line = format_row(r);
  CHECK_THAT(line, ContainsSubstring("0.100000,0.220000,asym,0.333333,nan,"));
  CHECK_THAT(line, ContainsSubstring(",1,inf,"));
  CHECK_THAT(line, ContainsSubstring(",0,nan"));
}

TEST_CASE("csv files round-trip and are byte-stable across runs") {
  SystemConfig cfg = preset_config('C');
  SweepSpec spec;
  spec.var = SweepSpec::Var::delta;
  spec.from = 0.10;
  spec.to = 0.40;
  spec.steps = 16;
  spec.fixed = 0.1;
  spec.opts.mode = Source::asymptotic;
  auto rows = sweep(cfg, spec);

  auto d1 = fresh_dir("csv_a");
  auto d2 = fresh_dir("csv_b");
  auto a1 = write_sweep_outputs(cfg, spec, rows, d1.string());
  auto a2 = write_sweep_outputs(cfg, spec, sweep(cfg, spec), d2.string());
  CHECK(slurp(a1.csv_path) == slurp(a2.csv_path));
  CHECK(slurp(a1.svg_path) == slurp(a2.svg_path));

  auto back = read_rows(a1.csv_path);
  REQUIRE(back.size() == rows.size());
  for (size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].mode == rows[i].mode);
    CHECK(back[i].feasible == rows[i].feasible);
    CHECK_THAT(back[i].delta, WithinAbs(rows[i].delta, 1e-9));
    CHECK_THAT(back[i].psi_gated, WithinAbs(rows[i].psi_gated, 1e-6));
  }

  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("gating shows a step at the duty threshold in closed form") {
  SystemConfig cfg = preset_config('C');
  SweepSpec spec;
  spec.var = SweepSpec::Var::delta;
  spec.from = 0.10;
  spec.to = 0.40;
  spec.steps = 16;
  spec.fixed = 0.1;
  spec.opts.mode = Source::asymptotic;
  auto rows = sweep(cfg, spec);
  const SweepRow *lo = nullptr, *hi = nullptr;
  for (const auto& r : rows) {
    if (std::abs(r.delta - 0.22) < 1e-12) lo = &r;
    if (std::abs(r.delta - 0.24) < 1e-12) hi = &r;
  }
  REQUIRE(lo);
  REQUIRE(hi);
  CHECK_FALSE(lo->feasible);
  CHECK(lo->psi_gated == 0.0);
  CHECK(lo->psi_raw > 0.0);
  CHECK(hi->feasible);
  CHECK(hi->psi_gated >= 0.5);
  CHECK(hi->psi_gated == hi->psi_raw);
}

TEST_CASE("traffic sweeps gate on the duty-dependent load cap") {
  SystemConfig cfg = preset_config('C');
  auto th = feasibility_thresholds(cfg);
  SweepSpec spec;
  spec.var = SweepSpec::Var::rho;
  spec.from = 0.05;
  spec.to = 0.60;
  spec.steps = 12;
  spec.fixed = 0.30;
  spec.opts.mode = Source::asymptotic;
  auto rows = sweep(cfg, spec);
  for (const auto& r : rows) {
    CHECK(r.feasible == (r.rho <= th.rho_safe_at(0.30)));
    CHECK(r.realized_duty == 0.30);
    CHECK(r.reps == 0);
    CHECK(std::isnan(r.ci_psi));
    CHECK(r.wq_mean_ms == 0.0);
    CHECK(std::isnan(r.t_max_ms));
  }
}

TEST_CASE("phase cells carry the closed-form region labels") {
  SystemConfig cfg = preset_config('C');
  auto th = feasibility_thresholds(cfg);
  auto cells = phase(cfg, {0.05, 0.6, 5}, {0.0, 1.0, 5});
  REQUIRE(cells.size() == 25);
  for (const auto& c : cells) {
    std::string want = c.delta < th.delta_safe ? "safety-infeasible"
                       : c.rho > th.rho_safe_at(c.delta) ? "queue-limited"
                                                         : "feasible";
    CHECK(c.region == want);
  }
}

TEST_CASE("svg artifacts are well-formed and re-render purely from the csv") {
  SystemConfig cfg = preset_config('C');
  auto dir = fresh_dir("svg");

  SweepSpec spec;
  spec.var = SweepSpec::Var::delta;
  spec.opts.mode = Source::asymptotic;
  auto rows = sweep(cfg, spec);
  auto art = write_sweep_outputs(cfg, spec, rows, dir.string());
  std::string svg = slurp(art.svg_path);
  CHECK_THAT(svg, ContainsSubstring("<svg"));
  CHECK_THAT(svg, ContainsSubstring("</svg>"));
  CHECK_THAT(svg, ContainsSubstring("delta_safe="));
  auto th = feasibility_thresholds(cfg);
  std::string again = render_sweep_svg(read_rows(art.csv_path), true,
                                       th.delta_safe,
                                       "delta_safe=" + fmt_grid(th.delta_safe));
  CHECK(svg == again);

  auto cells = phase(cfg, {0.05, 0.6, 10}, {0.0, 1.0, 10});
  auto part = write_phase_outputs(cfg, cells, dir.string());
  std::string psvg = slurp(part.svg_path);
  CHECK_THAT(psvg, ContainsSubstring("</svg>"));
  CHECK_THAT(psvg, ContainsSubstring("rho_safe"));
  std::string pagain = render_phase_svg(read_phase(part.csv_path), th.delta_safe,
                                        th.rho_safe_coeff);
  CHECK(psvg == pagain);

  fs::remove_all(dir);
}

TEST_CASE("embedded presets match the files shipped in the repository") {
  const std::pair<char, const char*> presets[] = {
      {'A', "preset_A.toml"}, {'B', "preset_B.toml"},
      {'C', "preset_C.toml"}, {'D', "preset_D.toml"}};
  for (auto [id, file] : presets) {
    std::string disk = slurp(std::string(USAM_SOURCE_DIR) + "/presets/" + file);
    CHECK(preset_text(id) == disk);
  }
}

TEST_CASE("analyze rows agree between harness call and csv read-back") {
  SystemConfig cfg = preset_config('C');
  AnalyzeOptions ao;
  ao.mode = Source::simulated;
  ao.reps = 2;
  ao.horizon_s = 30.0;
  ao.seed = 7;
  auto res = analyze(cfg, 0.1, 0.3, ao);
  CHECK(res.report.feasible);
  CHECK(res.row.reps == 2);
  CHECK(res.sim.reps.size() == 2);
  CHECK(res.row.psi_gated == res.report.psi_gated);
  CHECK(res.row.realized_duty > 0.0);

  auto dir = fresh_dir("analyze");
  write_rows((dir / "one.csv").string(), {res.row});
  auto back = read_rows((dir / "one.csv").string());
  REQUIRE(back.size() == 1);
  CHECK(back[0].mode == Source::simulated);
  CHECK(back[0].reps == 2);
  fs::remove_all(dir);
}

TEST_CASE("cli maps outcomes onto the documented exit codes") {
  auto dir = fresh_dir("cli");
  std::string out = " --out \"" + (dir / "o").string() + "\"";

  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("analyze --rho 0.1 --delta 0.3 --mode asym" + out) == 0);
  CHECK(fs::exists(dir / "o" / "analyze.csv"));
  CHECK(run_cli("sweep --var delta --steps 5 --mode asym" + out) == 0);
  CHECK(fs::exists(dir / "o" / "sweep_delta.csv"));
  CHECK(fs::exists(dir / "o" / "sweep_delta.svg"));
  CHECK(run_cli("sweep --var rho --steps 5 --mode asym" + out) == 0);
  CHECK(fs::exists(dir / "o" / "sweep_rho.csv"));
  CHECK(run_cli("phase --delta-grid 0.05:0.6:6 --rho-grid 0:1:6" + out) == 0);
  CHECK(fs::exists(dir / "o" / "phase.csv"));
  CHECK(fs::exists(dir / "o" / "phase.svg"));

  CHECK(run_cli("bogus") == 2);
  CHECK(run_cli("analyze --delta 0.3" + out) == 2);  // missing --rho
  CHECK(run_cli("analyze --rho 2.0 --delta 0.3 --mode asym" + out) == 2);
  CHECK(run_cli("analyze --rho 0.1 --delta 0.3 --mode warp" + out) == 2);
  CHECK(run_cli("--preset Z analyze --rho 0.1 --delta 0.3" + out) == 2);
  CHECK(run_cli("--config /nonexistent.toml analyze --rho 0.1 --delta 0.3" +
                out) == 2);
  CHECK(run_cli("phase --delta-grid nonsense" + out) == 2);

  std::ofstream blocker(dir / "file");
  blocker << "x";
  blocker.close();
  CHECK(run_cli("analyze --rho 0.1 --delta 0.3 --mode asym --out \"" +
                (dir / "file" / "sub").string() + "\"") == 3);

  fs::remove_all(dir);
}
