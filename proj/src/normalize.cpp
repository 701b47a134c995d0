#include "depthnorm/normalize.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "depthnorm/error.hpp"
#include "depthnorm/parallel.hpp"
#include "depthnorm/stats.hpp"

namespace depthnorm {

QuantileGrid::QuantileGrid(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.size() < 2 || levels_.front() != 0.0 || levels_.back() != 1.0) {
    throw DomainError("quantile grid must start at 0 and end at 1");
  }
  for (std::size_t k = 1; k < levels_.size(); ++k) {
    if (!(levels_[k] > levels_[k - 1])) throw DomainError("quantile grid must be strictly increasing");
  }
}

QuantileGrid QuantileGrid::uniform(std::size_t intervals) {
  if (intervals == 0) throw DomainError("quantile grid needs at least one interval");
  std::vector<double> levels(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    levels[k] = static_cast<double>(k) / static_cast<double>(intervals);
  }
  return QuantileGrid(std::move(levels));
}

namespace {

void check_length(const ExpressionMatrix& m, const ReferenceCurve& ref) {
  if (ref.size() != m.rows()) {
    throw DimensionError("reference has " + std::to_string(ref.size()) + " values for " +
                         std::to_string(m.rows()) + " rows");
  }
}

// Mean of ref[first, last); exact when the range is constant.
double range_mean(std::span<const double> ref, std::size_t first, std::size_t last) {
  if (ref[first] == ref[last - 1]) return ref[first];
  double acc = 0.0;
  for (std::size_t k = first; k < last; ++k) acc += ref[k];
  return acc / static_cast<double>(last - first);
}

}  // namespace

ExpressionMatrix quantile_normalize_full(const ExpressionMatrix& m, const ReferenceCurve& ref) {
  check_length(m, ref);
  ExpressionMatrix out = m;
  const auto target = ref.values();
  parallel_for(m.cols(), [&](std::size_t j) {
    const auto col = m.column(j);
    std::vector<std::size_t> order(col.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return col[a] < col[b]; });
    auto dst = out.column(j);
    std::size_t start = 0;
    while (start < order.size()) {
      std::size_t stop = start + 1;
      while (stop < order.size() && col[order[stop]] == col[order[start]]) ++stop;
      const double value = range_mean(target, start, stop);
      for (std::size_t k = start; k < stop; ++k) dst[order[k]] = value;
      start = stop;
    }
  });
  return out;
}

ExpressionMatrix quantile_normalize_subset(const ExpressionMatrix& m, const ReferenceCurve& ref,
                                           const QuantileGrid& grid) {
  check_length(m, ref);
  const auto& levels = grid.levels();
  std::vector<double> ref_knots(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    ref_knots[k] = stats::quantile_sorted(ref.values(), levels[k]);
  }

  ExpressionMatrix out = m;
  parallel_for(m.cols(), [&](std::size_t j) {
    const auto col = m.column(j);
    std::vector<double> sorted(col.begin(), col.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> knots(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) knots[k] = stats::quantile_sorted(sorted, levels[k]);

    auto dst = out.column(j);
    for (std::size_t i = 0; i < col.size(); ++i) {
      const double x = col[i];
      const auto lo = std::lower_bound(knots.begin(), knots.end(), x);
      if (lo == knots.end() || (x < knots.front())) {
        throw DomainError("value outside the column's knot range; extrapolation is not supported");
      }
      const auto a = static_cast<std::size_t>(lo - knots.begin());
      if (knots[a] == x) {
        const auto hi = std::upper_bound(lo, knots.end(), x);
        const auto b = static_cast<std::size_t>(hi - knots.begin()) - 1;
        dst[i] = a == b ? ref_knots[a] : ref_knots[a] + (ref_knots[b] - ref_knots[a]) / 2.0;
        continue;
      }
      const double t = (x - knots[a - 1]) / (knots[a] - knots[a - 1]);
      dst[i] = ref_knots[a - 1] + t * (ref_knots[a] - ref_knots[a - 1]);
    }
  });
  return out;
}

ReferenceMode parse_reference_mode(std::string_view name) {
  if (name == "deepest") return ReferenceMode::deepest;
  if (name == "median" || name == "component_median") return ReferenceMode::component_median;
  throw UsageError("unknown reference '" + std::string(name) + "' (expected deepest, median)");
}

MappingMode parse_mapping_mode(std::string_view name) {
  if (name == "full") return MappingMode::full;
  if (name == "subset") return MappingMode::subset;
  throw UsageError("unknown mode '" + std::string(name) + "' (expected full, subset)");
}

NormalizeResult normalize_pipeline(const ExpressionMatrix& m, const NormalizeConfig& cfg) {
  const ExpressionMatrix base = cfg.prenorm ? linear_prenormalize(m, *cfg.prenorm) : m;
  const ExpressionMatrix sorted = column_sort(base);

  std::optional<BorderSequence> borders;
  std::optional<DepthResult> depth;
  auto reference = [&] {
    if (cfg.reference == ReferenceMode::component_median) {
      return ReferenceCurve(component_wise_median(sorted), ReferenceSource::component_median);
    }
    borders = extract_borders(pairwise_distances(sorted));
    depth = depth_values(*borders);
    return deepest_curve(sorted, *borders);
  }();

  auto normalized = cfg.mode == MappingMode::full
                        ? quantile_normalize_full(base, reference)
                        : quantile_normalize_subset(base, reference,
                                                    QuantileGrid::uniform(cfg.subset_intervals));
  return {std::move(normalized), std::move(reference), std::move(borders), std::move(depth)};
}

}  // namespace depthnorm
