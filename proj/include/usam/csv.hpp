#pragma once

// CSV row model shared by the sweep writer, the SVG renderer and the tests.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "usam/metrics.hpp"
#include "usam/model.hpp"

namespace usam {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr const char* kCsvHeader =
    "rho,delta,mode,F,R,S,psi_raw,psi_gated,feasible,aoi_ms,paoi_ms,aos_ms,"
    "voi,aoc,viol_M,viol_SC,viol_FC,viol_S,wq_mean_ms,t_max_ms,realized_duty,"
    "reps,ci_psi";

struct SweepRow {
  double rho = 0.0;
  double delta = 0.0;
  Source mode = Source::asymptotic;
  double f = kNaN, r = kNaN, s = kNaN;
  double psi_raw = kNaN, psi_gated = kNaN;
  bool feasible = false;
  double aoi_ms = kNaN, paoi_ms = kNaN, aos_ms = kNaN;
  double voi = kNaN, aoc = kNaN;
  std::array<double, kNumCls> viol{kNaN, kNaN, kNaN, kNaN};
  double wq_mean_ms = kNaN;
  double t_max_ms = kNaN;
  double realized_duty = kNaN;
  int reps = 0;
  double ci_psi = kNaN;
};

// Grid coordinates keep 6 fixed decimals; measured values keep 6 significant
// digits; NaN and infinities print as nan/inf/-inf; booleans as 0/1.
inline std::string fmt_grid(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string fmt_val(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string format_row(const SweepRow& r) {
  std::ostringstream os;
  os << fmt_grid(r.rho) << ',' << fmt_grid(r.delta) << ','
     << (r.mode == Source::simulated ? "sim" : "asym") << ',' << fmt_val(r.f)
     << ',' << fmt_val(r.r) << ',' << fmt_val(r.s) << ',' << fmt_val(r.psi_raw)
     << ',' << fmt_val(r.psi_gated) << ',' << (r.feasible ? 1 : 0) << ','
     << fmt_val(r.aoi_ms) << ',' << fmt_val(r.paoi_ms) << ',' << fmt_val(r.aos_ms)
     << ',' << fmt_val(r.voi) << ',' << fmt_val(r.aoc);
  for (double v : r.viol) os << ',' << fmt_val(v);
  os << ',' << fmt_val(r.wq_mean_ms) << ',' << fmt_val(r.t_max_ms) << ','
     << fmt_val(r.realized_duty) << ',' << r.reps << ',' << fmt_val(r.ci_psi);
  return os.str();
}

inline void write_rows(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << kCsvHeader << '\n';
  for (const auto& r : rows) f << format_row(r) << '\n';
  if (!f.good()) throw IoError("failed writing: " + path);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline double to_double(const std::string& s) {
  if (s == "nan") return kNaN;
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  return std::stod(s);
}

}  // namespace detail

inline std::vector<SweepRow> read_rows(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(f, line)) throw IoError("empty csv: " + path);
  if (line != kCsvHeader) throw IoError("unexpected csv header in " + path);
  std::vector<SweepRow> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto c = detail::split_csv_line(line);
    if (c.size() != 23) throw IoError("bad csv row in " + path + ": " + line);
    SweepRow r;
    r.rho = detail::to_double(c[0]);
    r.delta = detail::to_double(c[1]);
    r.mode = c[2] == "sim" ? Source::simulated : Source::asymptotic;
    r.f = detail::to_double(c[3]);
    r.r = detail::to_double(c[4]);
    r.s = detail::to_double(c[5]);
    r.psi_raw = detail::to_double(c[6]);
    r.psi_gated = detail::to_double(c[7]);
    r.feasible = c[8] == "1";
    r.aoi_ms = detail::to_double(c[9]);
    r.paoi_ms = detail::to_double(c[10]);
    r.aos_ms = detail::to_double(c[11]);
    r.voi = detail::to_double(c[12]);
    r.aoc = detail::to_double(c[13]);
    for (int k = 0; k < kNumCls; ++k) r.viol[k] = detail::to_double(c[14 + k]);
    r.wq_mean_ms = detail::to_double(c[18]);
    r.t_max_ms = detail::to_double(c[19]);
    r.realized_duty = detail::to_double(c[20]);
    r.reps = static_cast<int>(detail::to_double(c[21]));
    r.ci_psi = detail::to_double(c[22]);
    rows.push_back(r);
  }
  return rows;
}

struct PhaseCell {
  double delta = 0.0;
  double rho = 0.0;
  std::string region;  // safety-infeasible | queue-limited | feasible
};

inline void write_phase(const std::string& path, const std::vector<PhaseCell>& cells) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << "delta,rho,region\n";
  for (const auto& c : cells)
    f << fmt_grid(c.delta) << ',' << fmt_grid(c.rho) << ',' << c.region << '\n';
  if (!f.good()) throw IoError("failed writing: " + path);
}

inline std::vector<PhaseCell> read_phase(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(f, line) || line != "delta,rho,region")
    throw IoError("unexpected phase header in " + path);
  std::vector<PhaseCell> cells;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto c = detail::split_csv_line(line);
    if (c.size() != 3) throw IoError("bad phase row in " + path + ": " + line);
    cells.push_back({detail::to_double(c[0]), detail::to_double(c[1]), c[2]});
  }
  return cells;
}

}  // namespace usam
