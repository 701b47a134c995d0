#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "depthnorm/matrix.hpp"

namespace depthnorm {

// Probe-level intensities with contiguous blocks of probes per gene.
class ProbeMatrix {
public:
  // probe_to_gene[p] is the 0-based gene of probe row p. Genes must appear as
  // contiguous runs numbered 0, 1, 2, ... Throws DimensionError otherwise.
  ProbeMatrix(ExpressionMatrix values, std::vector<std::size_t> probe_to_gene);

  static ProbeMatrix uniform_blocks(ExpressionMatrix values, std::size_t probes_per_gene);

  const ExpressionMatrix& values() const noexcept { return values_; }
  const std::vector<std::size_t>& probe_to_gene() const noexcept { return probe_to_gene_; }
  std::size_t gene_count() const noexcept { return block_start_.size(); }
  // First probe row and probe count of gene g.
  std::size_t block_start(std::size_t g) const { return block_start_[g]; }
  std::size_t block_size(std::size_t g) const { return block_size_[g]; }

  ProbeMatrix with_values(ExpressionMatrix values) const;

private:
  ExpressionMatrix values_;
  std::vector<std::size_t> probe_to_gene_;
  std::vector<std::size_t> block_start_;
  std::vector<std::size_t> block_size_;
};

// Small column-major two-way table.
struct TwoWayTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[j * rows + i]; }
  double& operator()(std::size_t i, std::size_t j) { return values[j * rows + i]; }
};

struct MedianPolishOptions {
  std::size_t max_iter = 20;
  // Stop once a sweep changes the residuals by at most this much in total
  // absolute value.
  double tol = 0.01;
};

struct MedianPolishResult {
  double overall = 0.0;
  std::vector<double> row_effects;
  std::vector<double> col_effects;
  TwoWayTable residuals;
  std::size_t iterations = 0;
  bool converged = false;

  // Per-column summary: overall + column effect.
  std::vector<double> column_summaries() const;
};

// Full (iterated) median polish, rows swept before columns. After every sweep
// the median of the column effects moves into the overall term, and after the
// column sweep the median of the row effects does too.
MedianPolishResult median_polish(const TwoWayTable& block, const MedianPolishOptions& options = {});

// Tukey biweight location: start at the median, scale by the raw MAD about it,
// reweight with (1 - u^2)^2 where u = (x - t) / (c * MAD + eps) until the step
// is below 1e-9 or 50 iterations. MAD = 0 returns the median. Throws
// DomainError on empty input.
double biweight_location(std::span<const double> values, double c = 5.0, double eps = 1e-4);

enum class SummaryMethod { median_polish, biweight };

struct SummaryOptions {
  MedianPolishOptions polish;
  double biweight_c = 5.0;
  double biweight_eps = 1e-4;
  // Subtract each probe row's median before the biweight summary.
  bool probe_centering = false;
};

// Gene x sample matrix of per-block summaries. Blocks are processed in
// parallel; output is independent of the worker count.
ExpressionMatrix summarize_genes(const ProbeMatrix& pm, SummaryMethod method,
                                 const SummaryOptions& options = {});

struct TestResult {
  std::vector<double> statistic;
  std::vector<double> p_value;
  std::optional<std::vector<bool>> truth;
};

// Per-row Welch two-sample t-test between classes 1 and 2, two-sided. Zero
// variance in both groups gives p = 1 for equal means and p = 0 otherwise.
TestResult two_sample_ttest(const ExpressionMatrix& gm, const ClassPartition& groups);

// Two-sided Welch p-value for two samples.
double welch_p_value(std::span<const double> a, std::span<const double> b, double* statistic = nullptr);

struct PowerSummary {
  double power_percent = 0.0;
  std::size_t false_discoveries = 0;
};

// A gene is a discovery when p < alpha. Throws DomainError without truth
// labels.
PowerSummary power_false_discovery(const TestResult& tr, double alpha);

// gene,statistic,p,flagged,truth
void write_test_csv(std::ostream& out, const TestResult& tr, double alpha);

}  // namespace depthnorm
