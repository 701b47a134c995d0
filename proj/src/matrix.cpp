#include "depthnorm/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "depthnorm/error.hpp"

namespace depthnorm {

namespace {

std::vector<std::string> default_ids(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t j = 0; j < n; ++j) ids.push_back(std::to_string(j + 1));
  return ids;
}

}  // namespace

ExpressionMatrix::ExpressionMatrix(std::size_t rows, std::size_t cols)
    : ExpressionMatrix(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

ExpressionMatrix::ExpressionMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                                   std::vector<std::string> sample_ids)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("matrix must have at least one row and one column");
  }
  if (values_.size() != rows * cols) {
    throw DimensionError("matrix storage holds " + std::to_string(values_.size()) +
                         " values, expected " + std::to_string(rows * cols));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw DomainError("non-finite value at row " + std::to_string(k % rows + 1) + ", column " +
                        std::to_string(k / rows + 1));
    }
  }
  set_sample_ids(sample_ids.empty() ? default_ids(cols) : std::move(sample_ids));
}

ExpressionMatrix ExpressionMatrix::from_columns(const std::vector<std::vector<double>>& columns,
                                                std::vector<std::string> sample_ids) {
  if (columns.empty()) throw DimensionError("no columns supplied");
  const std::size_t rows = columns.front().size();
  std::vector<double> values;
  values.reserve(rows * columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) {
      throw DimensionError("column " + std::to_string(j + 1) + " has " +
                           std::to_string(columns[j].size()) + " rows, expected " +
                           std::to_string(rows));
    }
    values.insert(values.end(), columns[j].begin(), columns[j].end());
  }
  return ExpressionMatrix(rows, columns.size(), std::move(values), std::move(sample_ids));
}

void ExpressionMatrix::set_sample_ids(std::vector<std::string> ids) {
  if (ids.size() != cols_) {
    throw DimensionError("got " + std::to_string(ids.size()) + " sample ids for " +
                         std::to_string(cols_) + " columns");
  }
  sample_ids_ = std::move(ids);
}

void ExpressionMatrix::set_class_labels(std::vector<int> labels) {
  if (labels.size() != cols_) {
    throw DimensionError("got " + std::to_string(labels.size()) + " class labels for " +
                         std::to_string(cols_) + " columns");
  }
  class_labels_ = std::move(labels);
}

bool ExpressionMatrix::columns_are_sorted() const {
  for (std::size_t j = 0; j < cols_; ++j) {
    const auto c = column(j);
    if (!std::is_sorted(c.begin(), c.end())) return false;
  }
  return true;
}

ClassPartition::ClassPartition(std::vector<int> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw PartitionError("empty class partition");
  const int max_label = *std::max_element(labels_.begin(), labels_.end());
  std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(max_label, 0)) + 1, 0);
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    if (labels_[j] < 1) {
      throw PartitionError("class label " + std::to_string(labels_[j]) + " of sample " +
                           std::to_string(j + 1) + " is outside [1, class_count]");
    }
    ++counts[static_cast<std::size_t>(labels_[j])];
  }
  for (int k = 1; k <= max_label; ++k) {
    const auto c = counts[static_cast<std::size_t>(k)];
    if (c < 2) {
      throw PartitionError("class " + std::to_string(k) + " has " + std::to_string(c) +
                           " member(s); at least 2 are required");
    }
  }
  class_count_ = max_label;
}

std::vector<std::size_t> ClassPartition::members(int label) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    if (labels_[j] == label) out.push_back(j);
  }
  return out;
}

ExpressionMatrix select_columns(const ExpressionMatrix& m, std::span<const std::size_t> columns) {
  if (columns.empty()) throw DimensionError("column selection is empty");
  std::vector<double> values;
  values.reserve(m.rows() * columns.size());
  std::vector<std::string> ids;
  std::vector<int> labels;
  for (const auto j : columns) {
    if (j >= m.cols()) throw DimensionError("column index " + std::to_string(j) + " out of range");
    const auto c = m.column(j);
    values.insert(values.end(), c.begin(), c.end());
    ids.push_back(m.sample_ids()[j]);
    if (m.class_labels()) labels.push_back((*m.class_labels())[j]);
  }
  ExpressionMatrix out(m.rows(), columns.size(), std::move(values), std::move(ids));
  if (m.class_labels()) out.set_class_labels(std::move(labels));
  out.set_sorted(m.sorted());
  return out;
}

}  // namespace depthnorm
