#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace depthnorm {

// Dense column-major matrix of features (rows) by samples (columns).
//
// Columns are stored contiguously so that per-sample operations (sorting,
// distances, quantile mapping) work on a std::span without copying.
class ExpressionMatrix {
public:
  ExpressionMatrix() = default;

  // Zero-filled matrix with default sample ids "1".."n".
  ExpressionMatrix(std::size_t rows, std::size_t cols);

  // Takes ownership of column-major values. Throws DimensionError when
  // values.size() != rows * cols or either extent is zero, DomainError on a
  // non-finite entry.
  ExpressionMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                   std::vector<std::string> sample_ids = {});

  // Builds from a list of columns; all columns must share one length.
  static ExpressionMatrix from_columns(const std::vector<std::vector<double>>& columns,
                                       std::vector<std::string> sample_ids = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t row, std::size_t col) const { return values_[col * rows_ + row]; }
  double& operator()(std::size_t row, std::size_t col) { return values_[col * rows_ + row]; }

  std::span<const double> column(std::size_t col) const {
    return {values_.data() + col * rows_, rows_};
  }
  std::span<double> column(std::size_t col) { return {values_.data() + col * rows_, rows_}; }

  std::span<const double> values() const noexcept { return values_; }

  const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }
  void set_sample_ids(std::vector<std::string> ids);

  const std::optional<std::vector<int>>& class_labels() const noexcept { return class_labels_; }
  void set_class_labels(std::vector<int> labels);

  // True when every column is known to be non-decreasing.
  bool sorted() const noexcept { return sorted_; }
  void set_sorted(bool flag) noexcept { sorted_ = flag; }

  // Checks the sorted flag against the data. Used by tests and assertions.
  bool columns_are_sorted() const;

  friend bool operator==(const ExpressionMatrix&, const ExpressionMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::string> sample_ids_;
  std::optional<std::vector<int>> class_labels_;
  bool sorted_ = false;
};

// Class membership for the samples of a matrix, labels in [1, class_count].
class ClassPartition {
public:
  // Throws PartitionError when a label is outside [1, max label], a class in
  // that range is empty, or a class has fewer than two members.
  explicit ClassPartition(std::vector<int> labels);

  const std::vector<int>& labels() const noexcept { return labels_; }
  int class_count() const noexcept { return class_count_; }
  std::size_t size() const noexcept { return labels_.size(); }

  // Column indices belonging to class `label`, ascending.
  std::vector<std::size_t> members(int label) const;

private:
  std::vector<int> labels_;
  int class_count_ = 0;
};

// Keeps only the listed columns, in the given order, carrying ids along.
ExpressionMatrix select_columns(const ExpressionMatrix& m, std::span<const std::size_t> columns);

}  // namespace depthnorm
