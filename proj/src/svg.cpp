#include "depthnorm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "depthnorm/stats.hpp"
#include "depthnorm/transforms.hpp"

namespace depthnorm {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 40.0;

struct Range {
  double lo, hi;
  double map(double v, double top, double bottom) const {
    const double span = hi > lo ? hi - lo : 1.0;
    return bottom - (v - lo) / span * (bottom - top);
  }
};

void header(std::ostream& out, std::string_view title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"10\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"16\" text-anchor=\"middle\">" << title << "</text>\n";
}

// Blue -> green -> yellow -> red along t in [0, 1].
std::string rainbow(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const double hue = 240.0 * (1.0 - t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "hsl(%.0f,90%%,45%%)", hue);
  return buf;
}

}  // namespace

FiveNumber five_number_summary(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return {sorted.front(), stats::quantile_sorted(sorted, 0.25), stats::quantile_sorted(sorted, 0.5),
          stats::quantile_sorted(sorted, 0.75), sorted.back()};
}

void write_boxplot_svg(std::ostream& out, const ExpressionMatrix& m, std::string_view title) {
  const ExpressionMatrix logged = log1_transform(m);
  std::vector<FiveNumber> boxes;
  Range range{INFINITY, -INFINITY};
  for (std::size_t j = 0; j < logged.cols(); ++j) {
    boxes.push_back(five_number_summary(logged.column(j)));
    range.lo = std::min(range.lo, boxes.back()[0]);
    range.hi = std::max(range.hi, boxes.back()[4]);
  }

  header(out, title);
  const double top = kMargin, bottom = kHeight - kMargin;
  const double step = (kWidth - 2 * kMargin) / static_cast<double>(boxes.size());
  for (std::size_t j = 0; j < boxes.size(); ++j) {
    const auto& b = boxes[j];
    const double cx = kMargin + step * (static_cast<double>(j) + 0.5);
    const double half = step * 0.3;
    out << "<line x1=\"" << cx << "\" x2=\"" << cx << "\" y1=\"" << range.map(b[0], top, bottom)
        << "\" y2=\"" << range.map(b[4], top, bottom) << "\" stroke=\"black\"/>\n";
    out << "<rect x=\"" << cx - half << "\" y=\"" << range.map(b[3], top, bottom) << "\" width=\""
        << 2 * half << "\" height=\"" << range.map(b[1], top, bottom) - range.map(b[3], top, bottom)
        << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << cx - half << "\" x2=\"" << cx + half << "\" y1=\""
        << range.map(b[2], top, bottom) << "\" y2=\"" << range.map(b[2], top, bottom)
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << cx << "\" y=\"" << kHeight - kMargin / 2
        << "\" text-anchor=\"middle\">" << m.sample_ids()[j] << "</text>\n";
  }
  out << "</svg>\n";
}

void write_depth_curves_svg(std::ostream& out, const ExpressionMatrix& sorted,
                            const DepthResult& depth, std::string_view title) {
  Range range{INFINITY, -INFINITY};
  for (const double v : sorted.values()) {
    range.lo = std::min(range.lo, v);
    range.hi = std::max(range.hi, v);
  }
  const std::size_t max_border = *std::max_element(depth.border_index.begin(), depth.border_index.end());

  header(out, title);
  const double top = kMargin, bottom = kHeight - kMargin;
  const std::size_t rows = sorted.rows();
  // At most ~800 vertices per curve.
  const std::size_t stride = std::max<std::size_t>(1, rows / 800);
  std::vector<std::size_t> order(sorted.cols());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return depth.border_index[a] < depth.border_index[b];
  });
  for (const auto j : order) {
    const double t = max_border > 1 ? static_cast<double>(depth.border_index[j] - 1) /
                                          static_cast<double>(max_border - 1)
                                    : 1.0;
    out << "<polyline fill=\"none\" stroke=\"" << rainbow(t) << "\" points=\"";
    const auto col = sorted.column(j);
    for (std::size_t i = 0; i < rows; i += stride) {
      const double x = kMargin + (kWidth - 2 * kMargin) * (rows > 1 ? static_cast<double>(i) / static_cast<double>(rows - 1) : 0.5);
      out << x << ',' << range.map(col[i], top, bottom) << ' ';
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace depthnorm
