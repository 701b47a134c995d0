#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "depthnorm/matrix.hpp"
#include "depthnorm/reference.hpp"

namespace depthnorm {

// Symmetric n x n matrix of Euclidean distances between sample columns.
class DistanceMatrix {
public:
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double value) {
    d_[i * n_ + j] = value;
    d_[j * n_ + i] = value;
  }

private:
  std::size_t n_;
  std::vector<double> d_;
};

// L2 distance between every pair of columns, computed once with the active
// SIMD kernel. Pairs are spread over the worker pool. The matrix type already
// rejects non-finite entries.
DistanceMatrix pairwise_distances(const ExpressionMatrix& m);

// One extracted farthest pair. A final odd sample is a singleton border with
// distance 0.
struct Border {
  std::size_t first;
  std::optional<std::size_t> second;
  double distance;

  bool singleton() const noexcept { return !second.has_value(); }
  friend bool operator==(const Border&, const Border&) = default;
};

class BorderSequence {
public:
  BorderSequence(std::vector<Border> borders, std::size_t n);

  const std::vector<Border>& borders() const noexcept { return borders_; }
  std::size_t sample_count() const noexcept { return n_; }
  const Border& deepest() const { return borders_.back(); }

  // Pair distances in extraction order, including the singleton's 0.
  std::vector<double> distances() const;

  friend bool operator==(const BorderSequence&, const BorderSequence&) = default;

private:
  std::vector<Border> borders_;
  std::size_t n_;
};

// Repeatedly removes the farthest remaining pair. Among equal distances the
// lexicographically smallest (i, j) by column index wins. Throws
// DimensionError when n < 2.
BorderSequence extract_borders(const DistanceMatrix& dm);

// Depth of column j is border_index[j] / sample_count, border_index 1-based.
struct DepthResult {
  std::vector<std::size_t> border_index;
  std::size_t sample_count = 0;
  std::vector<std::size_t> deepest;

  double depth(std::size_t column) const {
    return static_cast<double>(border_index[column]) / static_cast<double>(sample_count);
  }
};

DepthResult depth_values(const BorderSequence& bs);

struct FunctionalDepth {
  DistanceMatrix distances;
  BorderSequence borders;
  DepthResult depth;
};

FunctionalDepth functional_depth(const ExpressionMatrix& m);

// Deepest column, or the component-wise mean of the deepest pair. Works on any
// matrix; the normalization reference additionally needs sorted columns.
std::vector<double> deepest_element(const ExpressionMatrix& m, const BorderSequence& bs);

// Deepest sorted column as a reference curve. Throws DomainError when the
// matrix is not flagged sorted.
ReferenceCurve deepest_curve(const ExpressionMatrix& m);
ReferenceCurve deepest_curve(const ExpressionMatrix& m, const BorderSequence& bs);

// CSV: sample_id,border_index,depth,intra_pair_distance,pair_partner_id, one
// row per sample in column order. The partner of a singleton is empty.
void write_depth_csv(std::ostream& out, const ExpressionMatrix& m, const BorderSequence& bs,
                     const DepthResult& depth);

}  // namespace depthnorm
