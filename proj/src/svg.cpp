#include "usctopo/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "usctopo/errors.hpp"

namespace usctopo::svg {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 480;
constexpr double kLeft = 80;
constexpr double kRight = 110;
constexpr double kTop = 40;
constexpr double kBottom = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;
  double px(double x) const { return kLeft + (x - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight); }
  double py(double y) const {
    return kHeight - kBottom - (y - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom);
  }
};

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double pad = std::abs(lo) > 0 ? 0.05 * std::abs(lo) : 0.5;
    lo -= pad;
    hi += pad;
  }
}

void header(std::ostringstream& os, const std::string& title) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(title) << "</text>\n";
}

void axes(std::ostringstream& os, const Frame& f, const std::string& x_label,
          const std::string& y_label) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0)
     << "\" height=\"" << num(y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : nice_ticks(f.x_lo, f.x_hi)) {
    const double x = f.px(t);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x) << "\" y2=\""
       << num(y0 + 5) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << num(x) << "\" y=\"" << num(y0 + 18)
       << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(t) << "</text>\n";
  }
  for (double t : nice_ticks(f.y_lo, f.y_hi)) {
    const double y = f.py(t);
    os << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x0)
       << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(y + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(t) << "</text>\n";
  }
  os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 18)
     << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(x_label) << "</text>\n"
     << "<text transform=\"translate(20," << num((y0 + y1) / 2)
     << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(y_label)
     << "</text>\n";
}

void colorbar(std::ostringstream& os, double lo, double hi, const std::string& label,
              std::string (*scale)(double)) {
  const double x = kWidth - kRight + 30, top = kTop, bottom = kHeight - kBottom;
  constexpr int steps = 50;
  const double h = (bottom - top) / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = (i + 0.5) / steps;
    os << "<rect x=\"" << num(x) << "\" y=\"" << num(bottom - (i + 1) * h) << "\" width=\"14\" height=\""
       << num(h + 0.3) << "\" fill=\"" << scale(t) << "\"/>\n";
  }
  os << "<rect x=\"" << num(x) << "\" y=\"" << num(top) << "\" width=\"14\" height=\""
     << num(bottom - top) << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << num(x + 18) << "\" y=\"" << num(bottom) << "\" font-size=\"10\">"
     << tick_label(lo) << "</text>\n"
     << "<text x=\"" << num(x + 18) << "\" y=\"" << num(top + 8) << "\" font-size=\"10\">"
     << tick_label(hi) << "</text>\n"
     << "<text transform=\"translate(" << num(x + 42) << "," << num((top + bottom) / 2)
     << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" << escape(label)
     << "</text>\n";
}

bool inside(const std::optional<std::pair<double, double>>& window, double y) {
  return !window || (y >= window->first && y <= window->second);
}

std::string mix(const std::array<double, 3>& a, const std::array<double, 3>& b, double t) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(a[0] + (b[0] - a[0]) * t)),
                static_cast<int>(std::lround(a[1] + (b[1] - a[1]) * t)),
                static_cast<int>(std::lround(a[2] + (b[2] - a[2]) * t)));
  return buf;
}

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string heat_color(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{
      {{215, 25, 28}}, {{253, 174, 97}}, {{255, 255, 191}}, {{102, 189, 99}}, {{43, 131, 186}}}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double s = t * (stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(s), stops.size() - 2);
  return mix(stops[i], stops[i + 1], s - static_cast<double>(i));
}

std::string green_scale(double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  return mix({255, 255, 255}, {0, 100, 0}, t);
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) return {lo};
  const double raw = (hi - lo) / std::max(target, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

std::string render(const LinePlot& plot) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  auto scan = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]) || !inside(plot.y_window, ys[i])) continue;
      x_lo = std::min(x_lo, xs[i]);
      x_hi = std::max(x_hi, xs[i]);
      y_lo = std::min(y_lo, ys[i]);
      y_hi = std::max(y_hi, ys[i]);
    }
  };
  for (const auto& s : plot.lines) scan(s.x, s.y);
  for (const auto& p : plot.points) scan(p.x, p.y);
  if (!std::isfinite(x_lo)) {
    x_lo = 0;
    x_hi = 1;
    y_lo = 0;
    y_hi = 1;
  }
  widen(x_lo, x_hi);
  widen(y_lo, y_hi);
  const double pad = 0.04 * (y_hi - y_lo);
  const Frame f{x_lo, x_hi, y_lo - pad, y_hi + pad};

  std::ostringstream os;
  header(os, plot.title);
  os << "<clipPath id=\"plot\"><rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
     << num(kWidth - kLeft - kRight) << "\" height=\"" << num(kHeight - kTop - kBottom)
     << "\"/></clipPath>\n<g clip-path=\"url(#plot)\">\n";
  for (const auto& s : plot.lines) {
    // Break the polyline wherever a point is cut.
    std::string path;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i]) || !inside(plot.y_window, s.y[i])) {
        pen_down = false;
        continue;
      }
      path += (pen_down ? " L" : " M") + num(f.px(s.x[i])) + ' ' + num(f.py(s.y[i]));
      pen_down = true;
    }
    if (path.empty()) continue;
    os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\""
       << num(s.width) << '"' << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
  }
  double c_lo = 0, c_hi = 1;
  if (plot.color_range) std::tie(c_lo, c_hi) = *plot.color_range;
  for (const auto& p : plot.points) {
    for (std::size_t i = 0; i < p.x.size() && i < p.y.size(); ++i) {
      if (!inside(plot.y_window, p.y[i])) continue;
      const double v = i < p.value.size() ? p.value[i] : c_lo;
      const double t = c_hi > c_lo ? (v - c_lo) / (c_hi - c_lo) : 0.0;
      os << "<circle cx=\"" << num(f.px(p.x[i])) << "\" cy=\"" << num(f.py(p.y[i])) << "\" r=\""
         << num(p.radius) << "\" fill=\"" << heat_color(t) << "\"/>\n";
    }
  }
  os << "</g>\n";
  axes(os, f, plot.x_label, plot.y_label);
  if (!plot.points.empty()) colorbar(os, c_lo, c_hi, plot.color_label, &heat_color);
  double legend_y = kTop + 12;
  for (const auto& s : plot.lines) {
    if (s.label.empty()) continue;
    const double x = kWidth - kRight + 8;
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(legend_y) << "\" x2=\"" << num(x + 18)
       << "\" y2=\"" << num(legend_y) << "\" stroke=\"" << s.color << "\" stroke-width=\""
       << num(s.width) << "\"/>\n<text x=\"" << num(x + 22) << "\" y=\"" << num(legend_y + 4)
       << "\" font-size=\"10\">" << escape(s.label) << "</text>\n";
    legend_y += 16;
  }
  os << "</svg>\n";
  return os.str();
}

std::string render(const Heatmap& map) {
  const auto rows = map.values.rows();
  const auto cols = map.values.cols();
  if (static_cast<std::size_t>(rows) != map.row_labels.size() ||
      (!map.col_labels.empty() && static_cast<std::size_t>(cols) != map.col_labels.size())) {
    throw DimensionMismatch("heatmap labels do not match the value matrix");
  }
  std::ostringstream os;
  header(os, map.title);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kTop, y1 = kHeight - kBottom;
  const double cw = (x1 - x0) / std::max<Eigen::Index>(cols, 1);
  const double ch = (y1 - y0) / std::max<Eigen::Index>(rows, 1);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      os << "<rect x=\"" << num(x0 + c * cw) << "\" y=\"" << num(y0 + r * ch) << "\" width=\""
         << num(cw + 0.2) << "\" height=\"" << num(ch + 0.2) << "\" fill=\""
         << green_scale(map.values(r, c)) << "\"/>\n";
    }
    const double font = std::clamp(ch * 0.8, 4.0, 11.0);
    os << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(y0 + (r + 0.5) * ch + font / 3)
       << "\" text-anchor=\"end\" font-size=\"" << num(font) << "\">"
       << escape(map.row_labels[static_cast<std::size_t>(r)]) << "</text>\n";
  }
  for (Eigen::Index c = 0; c < cols && !map.col_labels.empty(); ++c) {
    const double font = std::clamp(cw * 0.8, 4.0, 11.0);
    os << "<text x=\"" << num(x0 + (c + 0.5) * cw) << "\" y=\"" << num(y1 + 14)
       << "\" text-anchor=\"middle\" font-size=\"" << num(font) << "\">"
       << escape(map.col_labels[static_cast<std::size_t>(c)]) << "</text>\n";
  }
  os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0)
     << "\" height=\"" << num(y1 - y0) << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 18)
     << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(map.x_label) << "</text>\n"
     << "<text transform=\"translate(14," << num((y0 + y1) / 2)
     << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(map.y_label)
     << "</text>\n";
  colorbar(os, 0.0, 1.0, map.color_label, &green_scale);
  os << "</svg>\n";
  return os.str();
}

}  // namespace usctopo::svg
