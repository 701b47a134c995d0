#include "depthnorm/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "depthnorm/error.hpp"
#include "depthnorm/kernels.hpp"
#include "depthnorm/parallel.hpp"
#include "depthnorm/stats.hpp"

namespace depthnorm {

ExpressionMatrix filter_zero_rows(const ExpressionMatrix& m, std::size_t max_zeros) {
  if (max_zeros > m.cols()) {
    throw DomainError("max_zeros " + std::to_string(max_zeros) + " exceeds the sample count " +
                      std::to_string(m.cols()));
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::size_t zeros = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) zeros += (m(i, j) == 0.0);
    if (zeros <= max_zeros) keep.push_back(i);
  }
  if (keep.empty()) throw EmptyResultError("zero-row filter removed every row");

  std::vector<double> values(keep.size() * m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t k = 0; k < keep.size(); ++k) values[j * keep.size() + k] = m(keep[k], j);
  }
  ExpressionMatrix out(keep.size(), m.cols(), std::move(values), m.sample_ids());
  if (m.class_labels()) out.set_class_labels(*m.class_labels());
  out.set_sorted(m.sorted());
  return out;
}

ExpressionMatrix log1_transform(const ExpressionMatrix& m) {
  ExpressionMatrix out = m;
  for (std::size_t j = 0; j < out.cols(); ++j) {
    for (auto& v : out.column(j)) {
      if (v < 0.0) throw DomainError("log(x+1) of negative value in column " + std::to_string(j + 1));
      v = std::log1p(v);
    }
  }
  return out;
}

ExpressionMatrix column_sort(const ExpressionMatrix& m) {
  ExpressionMatrix out = m;
  parallel_for(out.cols(), [&](std::size_t j) {
    auto c = out.column(j);
    std::stable_sort(c.begin(), c.end());
  });
  out.set_sorted(true);
  return out;
}

std::vector<double> component_wise_median(const ExpressionMatrix& m) {
  std::vector<double> out(m.rows());
  std::vector<double> row(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    out[i] = stats::median_inplace(row);
  }
  return out;
}

Anchor parse_anchor(std::string_view name) {
  if (name == "median") return Anchor::median;
  if (name == "q75") return Anchor::q75;
  if (name == "mean") return Anchor::mean;
  if (name == "sum") return Anchor::sum;
  throw UsageError("unknown anchor '" + std::string(name) + "' (expected median, q75, mean, sum)");
}

std::string_view to_string(Anchor anchor) noexcept {
  switch (anchor) {
    case Anchor::median: return "median";
    case Anchor::q75: return "q75";
    case Anchor::mean: return "mean";
    case Anchor::sum: return "sum";
  }
  return "?";
}

double anchor_statistic(std::span<const double> column, Anchor anchor) {
  switch (anchor) {
    case Anchor::median:
      return stats::median(column);
    case Anchor::q75: {
      std::vector<double> sorted(column.begin(), column.end());
      std::sort(sorted.begin(), sorted.end());
      return stats::quantile_sorted(sorted, 0.75);
    }
    case Anchor::mean:
      return kernels::sum(column) / static_cast<double>(column.size());
    case Anchor::sum:
      return kernels::sum(column);
  }
  return 0.0;
}

ExpressionMatrix linear_prenormalize(const ExpressionMatrix& m, Anchor anchor) {
  std::vector<double> anchors(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    anchors[j] = anchor_statistic(m.column(j), anchor);
    if (!(anchors[j] > 0.0)) {
      throw DegenerateScaleError("column " + m.sample_ids()[j] + " has non-positive " +
                                 std::string(to_string(anchor)) + " anchor " +
                                 std::to_string(anchors[j]));
    }
  }
  const double grand = stats::median(anchors);
  ExpressionMatrix out = m;
  for (std::size_t j = 0; j < out.cols(); ++j) kernels::scale(out.column(j), grand / anchors[j]);
  return out;
}

}  // namespace depthnorm
