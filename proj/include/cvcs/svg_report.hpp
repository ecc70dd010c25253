#pragma once

#include <string>
#include <vector>

namespace cvcs {

// Minimal self-contained SVG emission for the report bundle. No external
// renderer; everything is plain text shapes.

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series);

struct BarEntry {
  std::string group;  // x-axis label
  double mean = 0.0;
  double stddev = 0.0;
};

struct BarSeries {
  std::string label;
  std::vector<BarEntry> entries;
};

std::string bar_chart_svg(const std::string& title, const std::string& y_label,
                          const std::vector<BarSeries>& series);

// Row-major values; NaN cells are drawn hatched (missing data).
std::string heatmap_svg(const std::string& title, const std::string& x_label,
                        const std::string& y_label, int n_rows, int n_cols,
                        const std::vector<double>& values);

}  // namespace cvcs
