#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "depthnorm/normalize.hpp"
#include "depthnorm/outlier.hpp"
#include "depthnorm/summarize.hpp"

namespace depthnorm {

// Synthetic probe-level study: probes are center + t(df), floored at
// negative_floor, shifted by delta for the first affected_genes genes in the
// first half of the samples, then sample j is raised to base_power + eps_j
// with eps_j ~ uniform(distortion_lo, distortion_hi).
struct SimulationConfig {
  std::size_t n_samples = 12;
  std::size_t n_genes = 1000;
  std::size_t probes_per_gene = 11;
  std::vector<double> dfs{10.0};
  std::vector<double> deltas{0.0, 0.25, 0.5, 1.0, 2.0};
  std::size_t affected_genes = 100;
  double distortion_lo = 0.0;
  double distortion_hi = 2.0;
  double base_power = 3.0;
  double center = 3.0;
  double negative_floor = 0.001;
  std::size_t n_datasets = 20;
  std::uint64_t seed = kDefaultSeed;
  double alpha = 0.05;

  // Throws DomainError when an invariant fails.
  void validate() const;
};

struct GeneratedDataset {
  ProbeMatrix probes;
  std::vector<bool> truth;
  std::vector<double> exponents;
};

// Deterministic in (cfg.seed, dataset_seed). The same dataset_seed reuses the
// same t draws and exponents for every delta.
GeneratedDataset generate_dataset(const SimulationConfig& cfg, double df, double delta,
                                  std::uint64_t dataset_seed);

// The probes of generate_dataset before the power distortion.
ProbeMatrix generate_undistorted(const SimulationConfig& cfg, double df, double delta,
                                 std::uint64_t dataset_seed);

enum class StudyMethod { rma, fdn_median_polish, fdn_biweight };

std::string_view to_string(StudyMethod method) noexcept;
StudyMethod parse_study_method(std::string_view name);

struct StudyRow {
  double df = 0.0;
  double delta = 0.0;
  StudyMethod method = StudyMethod::rma;
  double mean_power = 0.0;
  double mean_false_discoveries = 0.0;
};

struct StudyReport {
  std::vector<StudyRow> rows;
  std::size_t n_datasets = 0;
};

struct StudyOptions {
  // FDN normalization; RMA always uses the component-wise median without
  // prenormalization.
  NormalizeConfig fdn{};
  SummaryOptions summary{};
};

// Rows ordered by df, delta, then method in enum order.
StudyReport run_study(const SimulationConfig& cfg, const std::vector<StudyMethod>& methods,
                      const StudyOptions& options = {});

// df,delta,method,mean_power_percent,mean_false_discoveries,n_datasets
void write_study_csv(std::ostream& out, const StudyReport& report);
StudyReport read_study_csv(std::istream& in);

// Methods as columns, (df, delta) as rows, power block then false discoveries.
void write_study_table(std::ostream& out, const StudyReport& report);

// key = value lines readable by the CLI's --config.
void write_simulation_config(std::ostream& out, const SimulationConfig& cfg);

}  // namespace depthnorm
