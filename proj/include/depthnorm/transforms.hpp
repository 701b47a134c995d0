#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "depthnorm/matrix.hpp"

namespace depthnorm {

// Keeps rows with at most `max_zeros` exact zeros, preserving row order.
// Throws DomainError when max_zeros > n, EmptyResultError when nothing is kept.
ExpressionMatrix filter_zero_rows(const ExpressionMatrix& m, std::size_t max_zeros);

// Elementwise natural log of (value + 1). Throws DomainError on negatives.
ExpressionMatrix log1_transform(const ExpressionMatrix& m);

// Sorts every column ascending and sets the sorted flag.
ExpressionMatrix column_sort(const ExpressionMatrix& m);

// Per-row median across columns (midpoint convention for even n).
std::vector<double> component_wise_median(const ExpressionMatrix& m);

enum class Anchor { median, q75, mean, sum };

Anchor parse_anchor(std::string_view name);
std::string_view to_string(Anchor anchor) noexcept;

// Column statistic used by linear_prenormalize.
double anchor_statistic(std::span<const double> column, Anchor anchor);

// Scales every column by grand / own anchor, where grand is the median of the
// per-column anchors. Throws DegenerateScaleError when an anchor is not
// positive.
ExpressionMatrix linear_prenormalize(const ExpressionMatrix& m, Anchor anchor);

}  // namespace depthnorm
