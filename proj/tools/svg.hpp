#pragma once

// Minimal SVG canvas: rects for heatmaps, polylines for curves.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace pdem::cli {

class Svg {
 public:
  Svg(double width, double height) : width_(width), height_(height) {}

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
             "\" fill=\"" + fill + "\" shape-rendering=\"crispEdges\"/>\n";
  }

  void outline(double x, double y, double w, double h) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
             "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width = 1.0,
                bool dashed = false) {
    if (pts.size() < 2) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"";
    if (dashed) body_ += " stroke-dasharray=\"4 3\"";
    body_ += " points=\"";
    for (const auto& [x, y] : pts) body_ += num(x) + "," + num(y) + " ";
    body_ += "\"/>\n";
  }

  void text(double x, double y, const std::string& s, double size = 10.0, const std::string& fill = "black",
            const char* anchor = "start") {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" + num(size) +
             "\" fill=\"" + fill + "\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
  }

  std::string render() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           num(width_) + "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) +
           "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
  }

  /// Diverging map for signed data: t = -1 dark, 0 mid gray, +1 white.
  static std::string signed_gray(double t) { return gray(0.5 + 0.5 * std::clamp(t, -1.0, 1.0)); }

  /// Grayscale from black (t = 0) to white (t = 1).
  static std::string gray(double t) {
    const int v = static_cast<int>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", v, v, v);
    return buf;
  }

 private:
  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }

  double width_, height_;
  std::string body_;
};

/// Maps data coordinates into a panel rectangle (y grows upward in data).
struct PanelMap {
  double left, top, width, height;
  double x_lo, x_hi, y_lo, y_hi;

  double px(double x) const { return left + width * (x - x_lo) / (x_hi - x_lo); }
  double py(double y) const { return top + height * (1.0 - (std::clamp(y, y_lo, y_hi) - y_lo) / (y_hi - y_lo)); }
};

/// Tick marks and labels along the bottom and left edges of a panel.
inline void axes(Svg& svg, const PanelMap& m, const std::vector<double>& xticks, const std::vector<double>& yticks,
                 const std::string& xlabel, const std::string& ylabel) {
  const double bottom = m.top + m.height;
  for (double t : xticks) {
    svg.polyline({{m.px(t), bottom}, {m.px(t), bottom + 4}}, "black", 0.6);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    svg.text(m.px(t), bottom + 14, buf, 9, "black", "middle");
  }
  for (double t : yticks) {
    svg.polyline({{m.left - 4, m.py(t)}, {m.left, m.py(t)}}, "black", 0.6);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    svg.text(m.left - 6, m.py(t) + 3, buf, 9, "black", "end");
  }
  svg.text(m.left + m.width / 2, bottom + 28, xlabel, 10, "black", "middle");
  svg.text(m.left - 42, m.top + m.height / 2, ylabel, 10, "black", "middle");
}

}  // namespace pdem::cli
