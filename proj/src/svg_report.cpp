#include "cvcs/svg_report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cvcs/block_io.hpp"

namespace cvcs {

namespace {

constexpr int kWidth = 860;
constexpr int kHeight = 520;
constexpr int kMarginL = 80, kMarginR = 150, kMarginT = 50, kMarginB = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

struct Scale {
  double lo = 0.0, hi = 1.0;
  double px0 = 0.0, px1 = 1.0;
  double operator()(double v) const {
    if (hi == lo) return 0.5 * (px0 + px1);
    return px0 + (v - lo) / (hi - lo) * (px1 - px0);
  }
};

void open_svg(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" font-family=\"sans-serif\" font-size=\"13\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"17\">"
     << title << "</text>\n";
}

void axes(std::ostringstream& os, const Scale& sx, const Scale& sy, const std::string& x_label,
          const std::string& y_label) {
  os << "<line x1=\"" << kMarginL << "\" y1=\"" << kHeight - kMarginB << "\" x2=\""
     << kWidth - kMarginR << "\" y2=\"" << kHeight - kMarginB << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\"" << kMarginL
     << "\" y2=\"" << kHeight - kMarginB << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double vx = sx.lo + (sx.hi - sx.lo) * i / 5.0;
    const double vy = sy.lo + (sy.hi - sy.lo) * i / 5.0;
    os << "<text x=\"" << sx(vx) << "\" y=\"" << kHeight - kMarginB + 18
       << "\" text-anchor=\"middle\">" << format_value(vx) << "</text>\n";
    os << "<text x=\"" << kMarginL - 8 << "\" y=\"" << sy(vy) + 4
       << "\" text-anchor=\"end\">" << format_value(vy) << "</text>\n";
  }
  os << "<text x=\"" << (kMarginL + kWidth - kMarginR) / 2 << "\" y=\"" << kHeight - 16
     << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  os << "<text x=\"20\" y=\"" << (kMarginT + kHeight - kMarginB) / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << (kMarginT + kHeight - kMarginB) / 2 << ")\">" << y_label << "</text>\n";
}

void legend(std::ostringstream& os, const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = kMarginT + 14 + static_cast<int>(i) * 20;
    os << "<rect x=\"" << kWidth - kMarginR + 12 << "\" y=\"" << y - 10
       << "\" width=\"14\" height=\"14\" fill=\"" << kPalette[i % 8] << "\"/>\n";
    os << "<text x=\"" << kWidth - kMarginR + 32 << "\" y=\"" << y + 2 << "\">" << labels[i]
       << "</text>\n";
  }
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = 0.0, y_hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_hi = std::max(y_hi, y);
      y_lo = std::min(y_lo, y);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0, y_hi = 1.0;
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;

  Scale sx{x_lo, x_hi, kMarginL, kWidth - kMarginR};
  Scale sy{y_lo, y_hi * 1.05, kHeight - kMarginB, kMarginT};

  std::ostringstream os;
  open_svg(os, title);
  axes(os, sx, sy, x_label, y_label);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < series.size(); ++i) {
    labels.push_back(series[i].label);
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[i % 8] << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[i].points) os << sx(x) << "," << sy(y) << " ";
    os << "\"/>\n";
    for (const auto& [x, y] : series[i].points) {
      os << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\""
         << kPalette[i % 8] << "\"/>\n";
    }
  }
  legend(os, labels);
  os << "</svg>\n";
  return os.str();
}

std::string bar_chart_svg(const std::string& title, const std::string& y_label,
                          const std::vector<BarSeries>& series) {
  std::size_t n_groups = 0;
  double y_hi = 0.0;
  for (const auto& s : series) {
    n_groups = std::max(n_groups, s.entries.size());
    for (const auto& e : s.entries) y_hi = std::max(y_hi, e.mean + e.stddev);
  }
  if (n_groups == 0) n_groups = 1;
  if (y_hi <= 0.0) y_hi = 1.0;

  Scale sy{0.0, y_hi * 1.1, kHeight - kMarginB, kMarginT};
  const double plot_w = kWidth - kMarginL - kMarginR;
  const double group_w = plot_w / static_cast<double>(n_groups);
  const double bar_w = group_w / (series.size() + 1.0);

  std::ostringstream os;
  open_svg(os, title);
  Scale sx{0.0, static_cast<double>(n_groups), kMarginL, kWidth - kMarginR};
  os << "<line x1=\"" << kMarginL << "\" y1=\"" << kHeight - kMarginB << "\" x2=\""
     << kWidth - kMarginR << "\" y2=\"" << kHeight - kMarginB << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\"" << kMarginL
     << "\" y2=\"" << kHeight - kMarginB << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double vy = y_hi * 1.1 * i / 5.0;
    os << "<text x=\"" << kMarginL - 8 << "\" y=\"" << sy(vy) + 4 << "\" text-anchor=\"end\">"
       << format_value(vy) << "</text>\n";
  }
  os << "<text x=\"20\" y=\"" << (kMarginT + kHeight - kMarginB) / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << (kMarginT + kHeight - kMarginB) / 2 << ")\">" << y_label << "</text>\n";

  std::vector<std::string> labels;
  for (std::size_t si = 0; si < series.size(); ++si) {
    labels.push_back(series[si].label);
    for (std::size_t g = 0; g < series[si].entries.size(); ++g) {
      const auto& e = series[si].entries[g];
      const double x = kMarginL + g * group_w + (si + 0.5) * bar_w;
      const double y_top = sy(e.mean);
      os << "<rect x=\"" << x << "\" y=\"" << y_top << "\" width=\"" << bar_w * 0.9
         << "\" height=\"" << (kHeight - kMarginB) - y_top << "\" fill=\"" << kPalette[si % 8]
         << "\"/>\n";
      if (e.stddev > 0.0) {
        const double cx = x + bar_w * 0.45;
        os << "<line x1=\"" << cx << "\" y1=\"" << sy(e.mean - e.stddev) << "\" x2=\"" << cx
           << "\" y2=\"" << sy(e.mean + e.stddev) << "\" stroke=\"black\"/>\n";
      }
      if (si == 0) {
        os << "<text x=\"" << kMarginL + (g + 0.5) * group_w << "\" y=\""
           << kHeight - kMarginB + 18 << "\" text-anchor=\"middle\" font-size=\"11\">" << e.group
           << "</text>\n";
      }
    }
  }
  legend(os, labels);
  os << "</svg>\n";
  return os.str();
}

std::string heatmap_svg(const std::string& title, const std::string& x_label,
                        const std::string& y_label, int n_rows, int n_cols,
                        const std::vector<double>& values) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi <= lo) hi = lo + 1.0;

  const double cell_w = (kWidth - kMarginL - kMarginR) / static_cast<double>(n_cols);
  const double cell_h = (kHeight - kMarginT - kMarginB) / static_cast<double>(n_rows);

  std::ostringstream os;
  open_svg(os, title);
  for (int r = 0; r < n_rows; ++r) {
    for (int c = 0; c < n_cols; ++c) {
      const double v = values[static_cast<std::size_t>(r) * n_cols + c];
      const double x = kMarginL + c * cell_w;
      const double y = kMarginT + r * cell_h;
      if (std::isnan(v)) {
        os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w << "\" height=\""
           << cell_h << "\" fill=\"#eeeeee\" stroke=\"white\"/>\n";
      } else {
        const double f = (v - lo) / (hi - lo);
        const int red = static_cast<int>(255 * f);
        const int blue = static_cast<int>(255 * (1.0 - f));
        os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w << "\" height=\""
           << cell_h << "\" fill=\"rgb(" << red << ",60," << blue << ")\" stroke=\"white\"/>\n";
      }
    }
  }
  for (int r = 0; r < n_rows; ++r) {
    os << "<text x=\"" << kMarginL - 8 << "\" y=\"" << kMarginT + (r + 0.6) * cell_h
       << "\" text-anchor=\"end\" font-size=\"11\">" << (r + 1) << "</text>\n";
  }
  for (int c = 0; c < n_cols; ++c) {
    os << "<text x=\"" << kMarginL + (c + 0.5) * cell_w << "\" y=\"" << kHeight - kMarginB + 18
       << "\" text-anchor=\"middle\" font-size=\"11\">" << (c + 1) << "</text>\n";
  }
  os << "<text x=\"" << (kMarginL + kWidth - kMarginR) / 2 << "\" y=\"" << kHeight - 16
     << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  os << "<text x=\"20\" y=\"" << (kMarginT + kHeight - kMarginB) / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << (kMarginT + kHeight - kMarginB) / 2 << ")\">" << y_label << "</text>\n";
  os << "<text x=\"" << kWidth - kMarginR + 12 << "\" y=\"" << kMarginT + 10
     << "\" font-size=\"11\">min " << format_value(lo) << "</text>\n";
  os << "<text x=\"" << kWidth - kMarginR + 12 << "\" y=\"" << kMarginT + 28
     << "\" font-size=\"11\">max " << format_value(hi) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace cvcs
