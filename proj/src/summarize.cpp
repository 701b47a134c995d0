#include "depthnorm/summarize.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "depthnorm/error.hpp"
#include "depthnorm/io.hpp"
#include "depthnorm/parallel.hpp"
#include "depthnorm/stats.hpp"

namespace depthnorm {

ProbeMatrix::ProbeMatrix(ExpressionMatrix values, std::vector<std::size_t> probe_to_gene)
    : values_(std::move(values)), probe_to_gene_(std::move(probe_to_gene)) {
  if (probe_to_gene_.size() != values_.rows()) {
    throw DimensionError("probe map has " + std::to_string(probe_to_gene_.size()) +
                         " entries for " + std::to_string(values_.rows()) + " probes");
  }
  for (std::size_t p = 0; p < probe_to_gene_.size(); ++p) {
    const std::size_t g = probe_to_gene_[p];
    if (g == block_start_.size()) {
      block_start_.push_back(p);
      block_size_.push_back(1);
    } else if (!block_start_.empty() && g == block_start_.size() - 1) {
      ++block_size_.back();
    } else {
      throw DimensionError("probe " + std::to_string(p + 1) +
                           " breaks the contiguous gene block layout");
    }
  }
}

ProbeMatrix ProbeMatrix::uniform_blocks(ExpressionMatrix values, std::size_t probes_per_gene) {
  if (probes_per_gene == 0 || values.rows() % probes_per_gene != 0) {
    throw DimensionError("probe count is not a multiple of probes per gene");
  }
  std::vector<std::size_t> map(values.rows());
  for (std::size_t p = 0; p < map.size(); ++p) map[p] = p / probes_per_gene;
  return ProbeMatrix(std::move(values), std::move(map));
}

ProbeMatrix ProbeMatrix::with_values(ExpressionMatrix values) const {
  return ProbeMatrix(std::move(values), probe_to_gene_);
}

std::vector<double> MedianPolishResult::column_summaries() const {
  std::vector<double> out(col_effects.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = overall + col_effects[j];
  return out;
}

MedianPolishResult median_polish(const TwoWayTable& block, const MedianPolishOptions& options) {
  const std::size_t p = block.rows;
  const std::size_t n = block.cols;
  if (p == 0 || n == 0 || block.values.size() != p * n) {
    throw DimensionError("median polish needs a non-empty rectangular block");
  }
  MedianPolishResult res;
  res.residuals = block;
  res.row_effects.assign(p, 0.0);
  res.col_effects.assign(n, 0.0);
  auto& z = res.residuals;

  std::vector<double> scratch(std::max(p, n));
  for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
    double change = 0.0;

    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < n; ++j) scratch[j] = z(i, j);
      const double m = stats::median_inplace(std::span(scratch.data(), n));
      for (std::size_t j = 0; j < n; ++j) z(i, j) -= m;
      res.row_effects[i] += m;
      change += std::fabs(m) * static_cast<double>(n);
    }
    double delta = stats::median(res.col_effects);
    for (auto& c : res.col_effects) c -= delta;
    res.overall += delta;

    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < p; ++i) scratch[i] = z(i, j);
      const double m = stats::median_inplace(std::span(scratch.data(), p));
      for (std::size_t i = 0; i < p; ++i) z(i, j) -= m;
      res.col_effects[j] += m;
      change += std::fabs(m) * static_cast<double>(p);
    }
    delta = stats::median(res.row_effects);
    for (auto& r : res.row_effects) r -= delta;
    res.overall += delta;

    res.iterations = iter;
    if (change <= options.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

double biweight_location(std::span<const double> values, double c, double eps) {
  if (values.empty()) throw DomainError("biweight location of an empty sequence");
  double t = stats::median(values);
  const double s = stats::mad(values);
  if (s == 0.0) return t;
  const double denom = c * s + eps;
  for (int it = 0; it < 50; ++it) {
    double wsum = 0.0, wxsum = 0.0;
    for (const double x : values) {
      const double u = (x - t) / denom;
      if (std::fabs(u) >= 1.0) continue;
      const double w = (1.0 - u * u) * (1.0 - u * u);
      wsum += w;
      wxsum += w * x;
    }
    if (wsum == 0.0) break;
    const double next = wxsum / wsum;
    const double step = std::fabs(next - t);
    t = next;
    if (step <= 1e-9) break;
  }
  return t;
}

ExpressionMatrix summarize_genes(const ProbeMatrix& pm, SummaryMethod method,
                                 const SummaryOptions& options) {
  const auto& x = pm.values();
  const std::size_t n = x.cols();
  const std::size_t genes = pm.gene_count();
  ExpressionMatrix out(genes, n, std::vector<double>(genes * n), x.sample_ids());
  if (x.class_labels()) out.set_class_labels(*x.class_labels());

  parallel_for(genes, [&](std::size_t g) {
    const std::size_t start = pm.block_start(g);
    const std::size_t size = pm.block_size(g);
    if (size == 1) {
      for (std::size_t j = 0; j < n; ++j) out(g, j) = x(start, j);
      return;
    }
    TwoWayTable block{size, n, std::vector<double>(size * n)};
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < size; ++i) block(i, j) = x(start + i, j);
    }

    if (method == SummaryMethod::median_polish) {
      const auto summaries = median_polish(block, options.polish).column_summaries();
      for (std::size_t j = 0; j < n; ++j) out(g, j) = summaries[j];
      return;
    }

    double level = 0.0;
    if (options.probe_centering) {
      std::vector<double> row(n), medians(size);
      for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < n; ++j) row[j] = block(i, j);
        medians[i] = stats::median_inplace(row);
        for (std::size_t j = 0; j < n; ++j) block(i, j) -= medians[i];
      }
      level = stats::median(medians);
    }
    for (std::size_t j = 0; j < n; ++j) {
      const std::span<const double> col(block.values.data() + j * size, size);
      out(g, j) = level + biweight_location(col, options.biweight_c, options.biweight_eps);
    }
  });
  return out;
}

double welch_p_value(std::span<const double> a, std::span<const double> b, double* statistic) {
  if (a.size() < 2 || b.size() < 2) throw DomainError("Welch test needs at least 2 values per group");
  const double ma = stats::mean(a), mb = stats::mean(b);
  const double va = stats::sample_variance(a) / static_cast<double>(a.size());
  const double vb = stats::sample_variance(b) / static_cast<double>(b.size());
  const double se2 = va + vb;
  double t = 0.0, p = 1.0;
  if (se2 == 0.0) {
    if (ma != mb) {
      t = ma > mb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      p = 0.0;
    }
  } else {
    t = (ma - mb) / std::sqrt(se2);
    const double df = se2 * se2 /
                      (va * va / static_cast<double>(a.size() - 1) +
                       vb * vb / static_cast<double>(b.size() - 1));
    const boost::math::students_t dist(df);
    p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))));
  }
  if (statistic) *statistic = t;
  return p;
}

TestResult two_sample_ttest(const ExpressionMatrix& gm, const ClassPartition& groups) {
  if (groups.class_count() != 2) throw PartitionError("two-sample test needs exactly 2 classes");
  if (groups.size() != gm.cols()) throw PartitionError("group labels do not match the sample count");
  const auto first = groups.members(1);
  const auto second = groups.members(2);

  TestResult tr;
  tr.statistic.resize(gm.rows());
  tr.p_value.resize(gm.rows());
  parallel_for(gm.rows(), [&](std::size_t g) {
    std::vector<double> a, b;
    a.reserve(first.size());
    b.reserve(second.size());
    for (const auto j : first) a.push_back(gm(g, j));
    for (const auto j : second) b.push_back(gm(g, j));
    tr.p_value[g] = welch_p_value(a, b, &tr.statistic[g]);
  });
  return tr;
}

PowerSummary power_false_discovery(const TestResult& tr, double alpha) {
  if (!tr.truth) throw DomainError("power needs truth labels");
  const auto& truth = *tr.truth;
  if (truth.size() != tr.p_value.size()) throw DimensionError("truth labels do not match the tests");
  std::size_t true_total = 0, true_hits = 0, false_hits = 0;
  for (std::size_t g = 0; g < truth.size(); ++g) {
    const bool hit = tr.p_value[g] < alpha;
    true_total += truth[g];
    true_hits += truth[g] && hit;
    false_hits += !truth[g] && hit;
  }
  PowerSummary out;
  out.power_percent = true_total ? 100.0 * static_cast<double>(true_hits) / static_cast<double>(true_total) : 0.0;
  out.false_discoveries = false_hits;
  return out;
}

void write_test_csv(std::ostream& out, const TestResult& tr, double alpha) {
  out << "gene,statistic,p,flagged,truth\n";
  for (std::size_t g = 0; g < tr.p_value.size(); ++g) {
    out << g + 1 << ',' << format_double(tr.statistic[g]) << ',' << format_double(tr.p_value[g]) << ','
        << (tr.p_value[g] < alpha ? 1 : 0) << ',';
    if (tr.truth) out << ((*tr.truth)[g] ? 1 : 0);
    out << '\n';
  }
}

}  // namespace depthnorm
