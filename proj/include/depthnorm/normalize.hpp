#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "depthnorm/depth.hpp"
#include "depthnorm/matrix.hpp"
#include "depthnorm/reference.hpp"
#include "depthnorm/transforms.hpp"

namespace depthnorm {

// Probability levels at which columns and reference are matched; strictly
// increasing, first 0 and last 1.
class QuantileGrid {
public:
  explicit QuantileGrid(std::vector<double> levels);

  // `intervals` equal steps: levels k / intervals.
  static QuantileGrid uniform(std::size_t intervals);

  const std::vector<double>& levels() const noexcept { return levels_; }

private:
  std::vector<double> levels_;
};

// Replaces each value by the reference value at its within-column rank. Tied
// values share the mean of the reference over their rank range.
ExpressionMatrix quantile_normalize_full(const ExpressionMatrix& m, const ReferenceCurve& ref);

// Piecewise-linear map from each column's quantiles at the grid levels onto the
// reference's quantiles at the same levels. A value sitting on a run of equal
// column knots maps to the midpoint of the matching reference knots.
ExpressionMatrix quantile_normalize_subset(const ExpressionMatrix& m, const ReferenceCurve& ref,
                                           const QuantileGrid& grid);

enum class ReferenceMode { component_median, deepest };
enum class MappingMode { full, subset };

ReferenceMode parse_reference_mode(std::string_view name);
MappingMode parse_mapping_mode(std::string_view name);

struct NormalizeConfig {
  std::optional<Anchor> prenorm = Anchor::median;
  ReferenceMode reference = ReferenceMode::deepest;
  MappingMode mode = MappingMode::full;
  // Only used in subset mode.
  std::size_t subset_intervals = 100;
};

struct NormalizeResult {
  ExpressionMatrix normalized;
  ReferenceCurve reference;
  // Present in deepest mode.
  std::optional<BorderSequence> borders;
  std::optional<DepthResult> depth;
};

// Optional linear prenormalization, column sort, reference construction and
// quantile mapping of the (prenormalized) columns in their original row order.
NormalizeResult normalize_pipeline(const ExpressionMatrix& m, const NormalizeConfig& cfg = {});

}  // namespace depthnorm
