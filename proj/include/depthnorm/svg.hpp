#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string_view>

#include "depthnorm/depth.hpp"
#include "depthnorm/matrix.hpp"

namespace depthnorm {

// min, q1, median, q3, max with linearly interpolated quartiles.
using FiveNumber = std::array<double, 5>;

FiveNumber five_number_summary(std::span<const double> values);

// One box per column of log(x + 1) values. Display only.
void write_boxplot_svg(std::ostream& out, const ExpressionMatrix& m, std::string_view title);

// Sorted columns drawn as curves, coloured from blue (shallow) to red (deep).
void write_depth_curves_svg(std::ostream& out, const ExpressionMatrix& sorted,
                            const DepthResult& depth, std::string_view title);

}  // namespace depthnorm
