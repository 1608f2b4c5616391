#pragma once

// Minimal static SVG output: one line chart per sweep, one region map per
// phase scan.  Pure functions of the row data, so re-rendering a CSV gives
// byte-identical markup.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "usam/csv.hpp"

namespace usam {
namespace svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Frame {
  double width = 760, height = 500;
  double left = 64, right = 150, top = 40, bottom = 48;
  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }
};

inline std::string header(const Frame& fr, const std::string& title) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(fr.width) +
       "\" height=\"" + num(fr.height) + "\" viewBox=\"0 0 " + num(fr.width) +
       " " + num(fr.height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(fr.left) + "\" y=\"24\" font-family=\"sans-serif\" "
       "font-size=\"15\">" + title + "</text>\n";
  return s;
}

inline std::string axes(const Frame& fr, const std::string& xlabel,
                        const std::string& ylabel, double xmin, double xmax) {
  std::string s;
  double x0 = fr.left;
  double y0 = fr.top, y1 = fr.top + fr.plot_h();
  s += "<rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" +
       num(fr.plot_w()) + "\" height=\"" + num(fr.plot_h()) +
       "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double fx = xmin + (xmax - xmin) * i / 4.0;
    double px = x0 + fr.plot_w() * i / 4.0;
    s += "<line x1=\"" + num(px) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(px) +
         "\" y2=\"" + num(y1 + 5) + "\" stroke=\"#444\"/>\n";
    char lbl[32];
    std::snprintf(lbl, sizeof lbl, "%.3f", fx);
    s += "<text x=\"" + num(px) + "\" y=\"" + num(y1 + 20) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
         lbl + "</text>\n";
    double fy = i / 4.0;
    double py = y1 - fr.plot_h() * i / 4.0;
    char yl[16];
    std::snprintf(yl, sizeof yl, "%.2f", fy);
    s += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(py + 4) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
         yl + "</text>\n";
  }
  s += "<text x=\"" + num(x0 + fr.plot_w() / 2) + "\" y=\"" +
       num(fr.height - 10) +
       "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
       xlabel + "</text>\n";
  s += "<text x=\"16\" y=\"" + num(y0 + fr.plot_h() / 2) +
       "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
       "transform=\"rotate(-90 16 " + num(y0 + fr.plot_h() / 2) + ")\">" +
       ylabel + "</text>\n";
  return s;
}

struct Series {
  std::string label;
  std::string color;
  std::vector<double> y;  // already scaled into [0,1]; NaN points are skipped
};

// Dashed vertical rule at a data-coordinate x, with a small caption.
inline std::string vrule(const Frame& fr, double xmin, double xmax, double x,
                         const std::string& label) {
  if (!(x >= xmin && x <= xmax)) return "";
  double px = fr.left + (x - xmin) / (xmax - xmin) * fr.plot_w();
  std::string s;
  s += "<line x1=\"" + num(px) + "\" y1=\"" + num(fr.top) + "\" x2=\"" + num(px) +
       "\" y2=\"" + num(fr.top + fr.plot_h()) +
       "\" stroke=\"#333\" stroke-dasharray=\"6 4\"/>\n";
  s += "<text x=\"" + num(px + 4) + "\" y=\"" + num(fr.top + 14) +
       "\" font-family=\"sans-serif\" font-size=\"11\">" + label + "</text>\n";
  return s;
}

}  // namespace svg

// Sweep chart.  Bounded metrics are drawn as-is; AoI and PAoI are divided by
// their own maxima so they fit the [0,1] axis (the legend says so).
inline std::string render_sweep_svg(const std::vector<SweepRow>& rows,
                                    bool var_is_delta, double rule_x,
                                    const std::string& rule_label) {
  svg::Frame fr;
  std::vector<double> xs;
  for (const auto& r : rows) xs.push_back(var_is_delta ? r.delta : r.rho);
  double xmin = xs.empty() ? 0.0 : *std::min_element(xs.begin(), xs.end());
  double xmax = xs.empty() ? 1.0 : *std::max_element(xs.begin(), xs.end());
  if (xmax <= xmin) xmax = xmin + 1.0;

  auto col = [&](auto get) {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(get(r));
    return v;
  };
  auto norm = [](std::vector<double> v) {
    double m = 0.0;
    for (double x : v)
      if (std::isfinite(x)) m = std::max(m, x);
    if (m > 0.0)
      for (double& x : v) x /= m;
    return v;
  };

  std::vector<svg::Series> series{
      {"F", "#1f77b4", col([](const SweepRow& r) { return r.f; })},
      {"R", "#2ca02c", col([](const SweepRow& r) { return r.r; })},
      {"S", "#9467bd", col([](const SweepRow& r) { return r.s; })},
      {"psi_raw", "#d62728", col([](const SweepRow& r) { return r.psi_raw; })},
      {"psi_gated", "#ff7f0e", col([](const SweepRow& r) { return r.psi_gated; })},
      {"AoI/max", "#8c564b", norm(col([](const SweepRow& r) { return r.aoi_ms; }))},
      {"PAoI/max", "#e377c2", norm(col([](const SweepRow& r) { return r.paoi_ms; }))},
      {"VoI", "#7f7f7f", col([](const SweepRow& r) { return r.voi; })},
      {"AoC", "#bcbd22", col([](const SweepRow& r) { return r.aoc; })},
  };

  std::string xlabel = var_is_delta ? "delta (duty factor)" : "rho (load factor)";
  std::string s = svg::header(fr, std::string("metric sweep vs ") +
                                      (var_is_delta ? "delta" : "rho"));
  s += svg::axes(fr, xlabel, "score (ages normalized)", xmin, xmax);
  for (const auto& se : series) {
    std::string pts;
    for (size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(se.y[i])) continue;
      double px = fr.left + (xs[i] - xmin) / (xmax - xmin) * fr.plot_w();
      double py = fr.top + fr.plot_h() * (1.0 - std::clamp(se.y[i], 0.0, 1.0));
      pts += svg::num(px) + "," + svg::num(py) + " ";
    }
    if (!pts.empty())
      s += "<polyline fill=\"none\" stroke=\"" + se.color +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  }
  s += svg::vrule(fr, xmin, xmax, rule_x, rule_label);
  double lx = fr.left + fr.plot_w() + 12, ly = fr.top + 8;
  for (const auto& se : series) {
    s += "<line x1=\"" + svg::num(lx) + "\" y1=\"" + svg::num(ly) + "\" x2=\"" +
         svg::num(lx + 18) + "\" y2=\"" + svg::num(ly) + "\" stroke=\"" +
         se.color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + svg::num(lx + 24) + "\" y=\"" + svg::num(ly + 4) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + se.label +
         "</text>\n";
    ly += 18;
  }
  s += "</svg>\n";
  return s;
}

// Region map over (delta, rho) with the closed-form stability curve
// rho_safe(delta) dashed on top plus a vertical rule at delta_safe.
inline std::string render_phase_svg(const std::vector<PhaseCell>& cells,
                                    double delta_safe, double rho_safe_coeff) {
  svg::Frame fr;
  fr.right = 170;
  std::vector<double> dx, ry;
  for (const auto& c : cells) {
    if (std::find(dx.begin(), dx.end(), c.delta) == dx.end()) dx.push_back(c.delta);
    if (std::find(ry.begin(), ry.end(), c.rho) == ry.end()) ry.push_back(c.rho);
  }
  std::sort(dx.begin(), dx.end());
  std::sort(ry.begin(), ry.end());
  double xmin = dx.front(), xmax = dx.back();
  double ymin = ry.front(), ymax = ry.back();
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  double cw = fr.plot_w() / dx.size();
  double ch = fr.plot_h() / ry.size();

  auto xpix = [&](double d) {
    return fr.left + (d - xmin) / (xmax - xmin) * fr.plot_w();
  };
  auto ypix = [&](double r) {
    return fr.top + fr.plot_h() * (1.0 - (r - ymin) / (ymax - ymin));
  };
  auto color = [](const std::string& region) {
    if (region == "safety-infeasible") return "#d9534f";
    if (region == "queue-limited") return "#f0ad4e";
    return "#5cb85c";
  };

  std::string s = svg::header(fr, "feasibility regions over (delta, rho)");
  for (const auto& c : cells) {
    size_t i = std::lower_bound(dx.begin(), dx.end(), c.delta) - dx.begin();
    size_t j = std::lower_bound(ry.begin(), ry.end(), c.rho) - ry.begin();
    double px = fr.left + i * cw;
    double py = fr.top + fr.plot_h() - (j + 1) * ch;
    s += "<rect x=\"" + svg::num(px) + "\" y=\"" + svg::num(py) + "\" width=\"" +
         svg::num(cw) + "\" height=\"" + svg::num(ch) + "\" fill=\"" +
         color(c.region) + "\"/>\n";
  }
  s += svg::axes(fr, "delta (duty factor)", "rho (load factor)", xmin, xmax);

  std::string pts;
  for (int i = 0; i <= 100; ++i) {
    double d = xmin + (xmax - xmin) * i / 100.0;
    double r = std::clamp(rho_safe_coeff * d, 0.0, 1.0);
    if (r < ymin || r > ymax) continue;
    pts += svg::num(xpix(d)) + "," + svg::num(ypix(r)) + " ";
  }
  if (!pts.empty())
    s += "<polyline fill=\"none\" stroke=\"#222\" stroke-dasharray=\"5 4\" "
         "stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  s += svg::vrule(fr, xmin, xmax, delta_safe, "delta_safe");

  double lx = fr.left + fr.plot_w() + 12, ly = fr.top + 8;
  for (const char* region : {"safety-infeasible", "queue-limited", "feasible"}) {
    s += "<rect x=\"" + svg::num(lx) + "\" y=\"" + svg::num(ly - 9) +
         "\" width=\"14\" height=\"12\" fill=\"" + color(region) + "\"/>\n";
    s += "<text x=\"" + svg::num(lx + 20) + "\" y=\"" + svg::num(ly + 2) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + region + "</text>\n";
    ly += 18;
  }
  s += "<text x=\"" + svg::num(lx) + "\" y=\"" + svg::num(ly + 6) +
       "\" font-family=\"sans-serif\" font-size=\"11\">dashes: rho_safe(delta)"
       "</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace usam
