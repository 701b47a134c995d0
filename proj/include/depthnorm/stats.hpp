#pragma once

#include <span>
#include <vector>

namespace depthnorm::stats {

// Median with the midpoint convention for even sizes. Reorders `values`.
// Throws DomainError on empty input.
double median_inplace(std::span<double> values);

double median(std::span<const double> values);

// Linear interpolation between order statistics: level p sits at 1-based
// position 1 + (size - 1) * p. `sorted` must be non-decreasing. Positions
// within 1e-9 of an integer snap to that order statistic so that knot levels
// reproduce sample values exactly.
double quantile_sorted(std::span<const double> sorted, double p);

// Raw median absolute deviation about the median (no consistency factor).
double mad(std::span<const double> values);

// 1-based ranks with ties receiving the average of their rank range.
std::vector<double> average_ranks(std::span<const double> values);

double mean(std::span<const double> values);

// Sample variance with the n - 1 denominator; 0 for fewer than two values.
double sample_variance(std::span<const double> values);

}  // namespace depthnorm::stats
