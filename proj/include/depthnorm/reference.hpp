#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace depthnorm {

enum class ReferenceSource { component_median, deepest, deepest_pair_average };

std::string_view to_string(ReferenceSource source) noexcept;

// Target distribution for quantile mapping: a finite non-decreasing vector
// with one entry per feature.
class ReferenceCurve {
public:
  // Throws DomainError when values are empty, non-finite or decreasing.
  ReferenceCurve(std::vector<double> values, ReferenceSource source);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  ReferenceSource source() const noexcept { return source_; }

private:
  std::vector<double> values_;
  ReferenceSource source_;
};

}  // namespace depthnorm
