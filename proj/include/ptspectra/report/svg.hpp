#pragma once

// Minimal deterministic SVG plotter: polylines, markers, axes with decimal
// ticks, optional log scales. Output bytes depend only on the data fed in.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace ptspectra::report {

inline std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class SvgPlot {
 public:
  SvgPlot(int width, int height, std::string title)
      : width_(width), height_(height), title_(std::move(title)) {}

  void set_labels(std::string x, std::string y) {
    xlabel_ = std::move(x);
    ylabel_ = std::move(y);
  }
  void set_log(bool logx, bool logy) {
    logx_ = logx;
    logy_ = logy;
  }
  void set_equal_aspect(bool on) { equal_aspect_ = on; }

  void add_series(std::vector<std::pair<double, double>> pts,
                  const std::string& color, bool line = true,
                  double stroke = 1.2, const std::string& cls = "") {
    series_.push_back({std::move(pts), color, line, stroke, cls});
  }
  void add_hline(double y, const std::string& color) {
    hlines_.push_back({y, color});
  }

  std::string render() const {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (auto& s : series_)
      for (auto& [x, y] : s.pts) {
        if (!use(x, logx_) || !use(y, logy_)) continue;
        x0 = std::min(x0, tr(x, logx_));
        x1 = std::max(x1, tr(x, logx_));
        y0 = std::min(y0, tr(y, logy_));
        y1 = std::max(y1, tr(y, logy_));
      }
    for (auto& [y, c] : hlines_)
      if (use(y, logy_)) {
        y0 = std::min(y0, tr(y, logy_));
        y1 = std::max(y1, tr(y, logy_));
      }
    if (x0 > x1) {
      x0 = 0;
      x1 = 1;
    }
    if (y0 > y1) {
      y0 = 0;
      y1 = 1;
    }
    pad(x0, x1);
    pad(y0, y1);
    if (equal_aspect_) {
      double xr = x1 - x0, yr = y1 - y0;
      double px = (width_ - 2 * margin_), py = (height_ - 2 * margin_);
      double scale = std::max(xr / px, yr / py);
      double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
      x0 = cx - 0.5 * scale * px;
      x1 = cx + 0.5 * scale * px;
      y0 = cy - 0.5 * scale * py;
      y1 = cy + 0.5 * scale * py;
    }

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(width_) + "\" height=\"" + std::to_string(height_) +
           "\" viewBox=\"0 0 " + std::to_string(width_) + " " +
           std::to_string(height_) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(width_ / 2) +
           "\" y=\"16\" text-anchor=\"middle\" font-size=\"13\">" + title_ +
           "</text>\n";

    auto px = [&](double x) {
      return margin_ + (tr(x, logx_) - x0) / (x1 - x0) *
                           (width_ - 2 * margin_);
    };
    auto py = [&](double y) {
      return height_ - margin_ -
             (tr(y, logy_) - y0) / (y1 - y0) * (height_ - 2 * margin_);
    };

    // frame + ticks
    svg += "<rect x=\"" + std::to_string(margin_) + "\" y=\"" +
           std::to_string(margin_) + "\" width=\"" +
           std::to_string(width_ - 2 * margin_) + "\" height=\"" +
           std::to_string(height_ - 2 * margin_) +
           "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (double t : ticks(x0, x1)) {
      double X = margin_ + (t - x0) / (x1 - x0) * (width_ - 2 * margin_);
      svg += "<line x1=\"" + fmt6(X) + "\" y1=\"" +
             std::to_string(height_ - margin_) + "\" x2=\"" + fmt6(X) +
             "\" y2=\"" + std::to_string(height_ - margin_ + 4) +
             "\" stroke=\"black\"/>\n";
      svg += "<text x=\"" + fmt6(X) + "\" y=\"" +
             std::to_string(height_ - margin_ + 16) +
             "\" text-anchor=\"middle\" font-size=\"10\">" + tick_label(t, logx_) +
             "</text>\n";
    }
    for (double t : ticks(y0, y1)) {
      double Y = height_ - margin_ -
                 (t - y0) / (y1 - y0) * (height_ - 2 * margin_);
      svg += "<line x1=\"" + std::to_string(margin_ - 4) + "\" y1=\"" +
             fmt6(Y) + "\" x2=\"" + std::to_string(margin_) + "\" y2=\"" +
             fmt6(Y) + "\" stroke=\"black\"/>\n";
      svg += "<text x=\"" + std::to_string(margin_ - 6) + "\" y=\"" +
             fmt6(Y + 3) + "\" text-anchor=\"end\" font-size=\"10\">" +
             tick_label(t, logy_) + "</text>\n";
    }
    svg += "<text x=\"" + std::to_string(width_ / 2) + "\" y=\"" +
           std::to_string(height_ - 6) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + xlabel_ +
           "</text>\n";
    svg += "<text x=\"14\" y=\"" + std::to_string(height_ / 2) +
           "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 "
           "14 " +
           std::to_string(height_ / 2) + ")\">" + ylabel_ + "</text>\n";

    for (auto& [y, color] : hlines_) {
      if (!use(y, logy_)) continue;
      svg += "<line x1=\"" + std::to_string(margin_) + "\" y1=\"" +
             fmt6(py(y)) + "\" x2=\"" + std::to_string(width_ - margin_) +
             "\" y2=\"" + fmt6(py(y)) + "\" stroke=\"" + color +
             "\" stroke-dasharray=\"4 3\" stroke-width=\"0.8\"/>\n";
    }

    for (auto& s : series_) {
      std::string cls = s.cls.empty() ? "" : " class=\"" + s.cls + "\"";
      if (s.line) {
        std::string pts;
        for (auto& [x, y] : s.pts) {
          if (!use(x, logx_) || !use(y, logy_)) continue;
          pts += fmt6(px(x)) + "," + fmt6(py(y)) + " ";
        }
        if (pts.empty()) continue;
        pts.pop_back();
        svg += "<polyline" + cls + " fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"" + fmt6(s.stroke) + "\" points=\"" + pts +
               "\"/>\n";
      } else {
        for (auto& [x, y] : s.pts) {
          if (!use(x, logx_) || !use(y, logy_)) continue;
          svg += "<circle" + cls + " cx=\"" + fmt6(px(x)) + "\" cy=\"" +
                 fmt6(py(y)) + "\" r=\"" + fmt6(s.stroke) + "\" fill=\"" +
                 s.color + "\"/>\n";
        }
      }
    }
    svg += "</svg>\n";
    return svg;
  }

 private:
  struct Series {
    std::vector<std::pair<double, double>> pts;
    std::string color;
    bool line;
    double stroke;
    std::string cls;
  };

  static bool use(double v, bool log) {
    return std::isfinite(v) && (!log || v > 0);
  }
  static double tr(double v, bool log) { return log ? std::log10(v) : v; }
  static void pad(double& a, double& b) {
    double r = b - a;
    if (r <= 0) r = std::max(1e-12, std::abs(a) * 1e-3 + 1e-12);
    a -= 0.05 * r;
    b += 0.05 * r;
  }
  static std::vector<double> ticks(double a, double b) {
    double range = b - a;
    double raw = range / 5.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    if (raw / mag > 5)
      step = 10 * mag;
    else if (raw / mag > 2)
      step = 5 * mag;
    else if (raw / mag > 1)
      step = 2 * mag;
    std::vector<double> out;
    double t = std::ceil(a / step) * step;
    for (; t <= b + 1e-12 * range; t += step) out.push_back(t);
    return out;
  }
  std::string tick_label(double t, bool log) const {
    return log ? ("1e" + fmt6(t)) : fmt6(t);
  }

  int width_, height_;
  int margin_ = 48;
  std::string title_, xlabel_, ylabel_;
  bool logx_ = false, logy_ = false, equal_aspect_ = false;
  std::vector<Series> series_;
  std::vector<std::pair<double, std::string>> hlines_;
};

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> p = {
      "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
      "#8c564b", "#17becf", "#e377c2", "#7f7f7f", "#bcbd22"};
  return p;
}

}  // namespace ptspectra::report
