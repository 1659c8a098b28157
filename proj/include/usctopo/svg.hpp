#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace usctopo::svg {

struct LineSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  double width = 1.5;
  bool dashed = false;
  std::string label;
};

// Scatter points coloured by a scalar through the heat colour map.
struct ColoredPoints {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> value;
  double radius = 1.6;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<LineSeries> lines;
  std::vector<ColoredPoints> points;
  // Data outside this window is cut, not clamped.
  std::optional<std::pair<double, double>> y_window;
  std::optional<std::pair<double, double>> color_range;
  std::string color_label;
};

struct Heatmap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  Eigen::MatrixXd values;  // rows x cols, expected in [0, 1]
  std::string color_label;
};

std::string render(const LinePlot& plot);
std::string render(const Heatmap& map);

// Red (low) through yellow and green to blue (high), t clamped to [0, 1].
std::string heat_color(double t);
// White (0) to dark green (1).
std::string green_scale(double t);

// Tick positions covering [lo, hi] with a 1-2-5 step.
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

std::string escape(const std::string& text);

}  // namespace usctopo::svg
