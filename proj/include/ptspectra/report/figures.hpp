#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ptspectra/report/bundle.hpp"
#include "ptspectra/report/svg.hpp"

namespace ptspectra::report {

namespace figure_detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw MissingTaskOutput("figure needs " + what);
}

inline std::vector<double> sorted_L(const ResultBundle& b) {
  std::set<double> s;
  for (auto& e : b.records) s.insert(e.params.L);
  return {s.begin(), s.end()};
}

}  // namespace figure_detail

// E_j against L, one polyline per mode index.
inline std::string fig1a(const ResultBundle& b) {
  figure_detail::require(!b.records.empty(), "spectrum or branches records");
  SvgPlot plot(640, 460, "eigenvalue branches");
  plot.set_labels("L", "Re E_j");
  int jmax = 0;
  for (auto& e : b.records) jmax = std::max(jmax, e.record.j);
  for (int j = 1; j <= jmax; ++j) {
    std::vector<std::pair<double, double>> line, dots;
    for (auto& e : b.records)
      if (e.record.j == j) {
        line.push_back({e.params.L, e.record.E.real()});
        if (e.record.regime == Regime::CO)
          dots.push_back({e.params.L, e.record.E.real()});
      }
    std::sort(line.begin(), line.end());
    plot.add_series(line, palette()[size_t(j - 1) % palette().size()]);
    if (!dots.empty())
      plot.add_series(dots, "#000000", false, 1.6, "complex-mark");
  }
  return plot.render();
}

// E_j L^2 against L with the box-law reference lines.
inline std::string fig1b(const ResultBundle& b) {
  figure_detail::require(!b.records.empty(), "spectrum or branches records");
  SvgPlot plot(640, 460, "box scaling");
  plot.set_labels("L", "Re E_j * L^2");
  int jmax = 0;
  for (auto& e : b.records) jmax = std::max(jmax, e.record.j);
  for (int j = 1; j <= jmax; ++j) {
    std::vector<std::pair<double, double>> line;
    for (auto& e : b.records)
      if (e.record.j == j)
        line.push_back(
            {e.params.L, e.record.E.real() * e.params.L * e.params.L});
    std::sort(line.begin(), line.end());
    plot.add_series(line, palette()[size_t(j - 1) % palette().size()]);
  }
  for (int j = 1; j <= std::min(jmax, 10); ++j)
    plot.add_hline(kPi * kPi * j * j / 4.0, "#888888");
  return plot.render();
}

// mapped eigenvalues in the complex plane
inline std::string fig1c(const ResultBundle& b) {
  figure_detail::require(!b.records.empty(), "spectrum or branches records");
  SvgPlot plot(520, 520, "mapped eigenvalues");
  plot.set_labels("Re E/(g L^(2n+1))", "Im E/(g L^(2n+1))");
  plot.set_equal_aspect(true);
  auto Ls = figure_detail::sorted_L(b);
  size_t ci = 0;
  for (double L : Ls) {
    std::vector<std::pair<double, double>> dots;
    for (auto& e : b.records)
      if (e.params.L == L)
        dots.push_back({e.record.E_mapped.real(), e.record.E_mapped.imag()});
    plot.add_series(dots, palette()[ci++ % palette().size()], false, 2.0,
                    "mapped");
  }
  return plot.render();
}

// the form-invariant family of Stokes graphs (all stored graphs overlaid)
inline std::string fig2a(const ResultBundle& b) {
  figure_detail::require(!b.graphs.empty(), "stokes_graph output");
  SvgPlot plot(560, 560, "Stokes graph family");
  plot.set_labels("Re y", "Im y");
  plot.set_equal_aspect(true);
  size_t ci = 0;
  for (auto& ge : b.graphs) {
    std::string color = palette()[ci++ % palette().size()];
    for (auto& l : ge.graph.lines) {
      std::vector<std::pair<double, double>> pts;
      for (Complex y : l.polyline)
        if (std::abs(y) < 3.5) pts.push_back({y.real(), y.imag()});
      if (pts.size() >= 2) plot.add_series(pts, color, true, 1.0, "antistokes");
    }
    std::vector<std::pair<double, double>> tp_dots, walls;
    for (auto& tp : ge.graph.tps)
      tp_dots.push_back({tp.alpha.real(), tp.alpha.imag()});
    plot.add_series(tp_dots, color, false, 2.4, "tp");
  }
  plot.add_series({{-1.0, 0.0}, {1.0, 0.0}}, "#000000", false, 2.8, "wall");
  return plot.render();
}

// complex components of the scaling graphs, branch and conjugate per n
inline std::string fig3a(const ResultBundle& b) {
  figure_detail::require(!b.branches.empty(), "scaling_graph output");
  SvgPlot plot(560, 560, "spectral scaling graphs");
  plot.set_labels("Re emapped", "Im emapped");
  plot.set_equal_aspect(true);
  size_t ci = 0;
  for (auto& br : b.branches) {
    std::string color = palette()[ci++ % palette().size()];
    std::vector<std::pair<double, double>> up, dn;
    for (auto& s : br.samples) {
      up.push_back({s.emapped.real(), s.emapped.imag()});
      dn.push_back({s.emapped.real(), -s.emapped.imag()});
    }
    plot.add_series(up, color, true, 1.4, "rco");
    plot.add_series(dn, color, true, 1.4, "rco");
  }
  return plot.render();
}

// shooting eigenvalues overlaid on the branch curve
inline std::string fig_suppl_comparison(const ResultBundle& b) {
  figure_detail::require(!b.branches.empty(), "scaling_graph output");
  figure_detail::require(!b.records.empty(), "spectrum or branches records");
  SvgPlot plot(560, 560, "shooting vs scaling branch");
  plot.set_labels("Re emapped", "Im emapped");
  plot.set_equal_aspect(true);
  const ScalingBranch& br = b.branches.front();
  std::vector<std::pair<double, double>> up, dn, dots;
  for (auto& s : br.samples) {
    up.push_back({s.emapped.real(), s.emapped.imag()});
    dn.push_back({s.emapped.real(), -s.emapped.imag()});
  }
  plot.add_series(up, "#2ca02c", true, 1.6, "rco");
  plot.add_series(dn, "#2ca02c", true, 1.6, "rco");
  for (auto& e : b.records)
    if (e.params.n == br.n)
      dots.push_back({e.record.E_mapped.real(), e.record.E_mapped.imag()});
  plot.add_series(dots, "#1f77b4", false, 1.8, "mapped");
  return plot.render();
}

// Render the requested figures; returns (filename, bytes) pairs.
inline std::vector<std::pair<std::string, std::string>> emit_figures(
    const ResultBundle& b, const std::vector<std::string>& which) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& name : which) {
    if (name == "fig1a")
      out.push_back({"fig1a.svg", fig1a(b)});
    else if (name == "fig1b")
      out.push_back({"fig1b.svg", fig1b(b)});
    else if (name == "fig1c")
      out.push_back({"fig1c.svg", fig1c(b)});
    else if (name == "fig2a")
      out.push_back({"fig2a.svg", fig2a(b)});
    else if (name == "fig3a")
      out.push_back({"fig3a.svg", fig3a(b)});
    else if (name == "suppl-comparison")
      out.push_back({"suppl-comparison.svg", fig_suppl_comparison(b)});
    else
      throw MissingTaskOutput("unknown figure '" + name + "'");
  }
  return out;
}

}  // namespace ptspectra::report
