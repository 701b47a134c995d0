#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "depthnorm/depth.hpp"
#include "depthnorm/matrix.hpp"

namespace depthnorm {

inline constexpr std::uint64_t kDefaultSeed = 20240607;

// Dense symmetric n x n matrix, row-major.
struct Covariance {
  std::size_t n = 0;
  std::vector<double> values;

  static Covariance identity(std::size_t n);
  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * n + j]; }
};

// Median of all border distances, the singleton's 0 included.
double robust_iqr(const BorderSequence& bs);

// Per-column ratio of the column's border distance to robust_iqr. Throws
// NumericError when the IQR estimate is 0.
std::vector<double> border_ratios(const BorderSequence& bs);

struct CalibrationSettings {
  double target_rate = 1e-4;
  std::size_t replicates = 100;
  std::uint64_t seed = kDefaultSeed;
};

struct TukeyCalibration {
  double g_factor = 0.0;
  double target_rate = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t features = 0;
  std::vector<double> per_replicate_quantiles;
};

// Monte-Carlo estimate of the Tukey factor. Each replicate draws a
// features x samples matrix with i.i.d. N(0, cov) rows, sorts its columns,
// extracts borders and records the (1 - target_rate) quantile of the
// per-column border ratios; the factor is the median over replicates.
// Replicate r uses an engine seeded from (seed, r), so the result does not
// depend on the worker count.
TukeyCalibration calibrate_g(std::size_t samples, std::size_t features, const Covariance& cov,
                             const CalibrationSettings& settings = {});

// Symmetrizes, clips negative eigenvalues to 0 and rescales to keep the
// original diagonal. Throws NumericError on non-finite input, a negative
// diagonal, or a diagonal entry the repair cannot restore.
Covariance repair_psd(const Covariance& cov);

// Inter-sample covariance from MAD scales (x 1.4826) and Spearman
// correlations mapped through 2 sin(pi rho / 6), then repaired to PSD.
// Throws DimensionError for fewer than 3 rows and DegenerateScaleError for a
// column with zero MAD.
Covariance robust_covariance(const ExpressionMatrix& m);

enum class FlagRule { farther_from_deepest, both_members };

struct OutlierOptions {
  bool flag_both_members = false;
};

struct ReportPair {
  // Column indices into the analysed matrix; `outer` is the member farther
  // from the deepest element of the scope.
  std::size_t outer = 0;
  std::optional<std::size_t> inner;
  std::string outer_id;
  std::string inner_id;
  double distance = 0.0;
  bool flagged = false;
};

struct FlaggedSample {
  std::size_t column = 0;
  std::string id;
  FlagRule rule = FlagRule::farther_from_deepest;
};

struct OutlierReport {
  // Empty for the global scope.
  std::optional<int> class_label;
  std::vector<ReportPair> pairs;
  double iqr_estimate = 0.0;
  double g_factor = 0.0;
  double benchmark = 0.0;
  std::size_t flagged_pairs = 0;
  std::vector<FlaggedSample> flagged_samples;

  std::string scope_name() const;
};

// Index of the member of (a, b) whose column is farther (L2) from
// `reference`; ties go to `a`.
std::size_t farther_member(const ExpressionMatrix& m, std::size_t a, std::size_t b,
                           std::span<const double> reference);

// Flags the maximal prefix of borders among `columns` whose distance is
// strictly above g_factor * robust_iqr. `sorted` must be column-sorted.
OutlierReport detect_in_scope(const ExpressionMatrix& sorted, std::span<const std::size_t> columns,
                              double g_factor, std::optional<int> class_label,
                              const OutlierOptions& options = {});

enum class OutlierScope { global, per_class };

// Global scope yields one report; per-class one report per class, each with
// its own borders and IQR but the shared g_factor. Unsorted input is column
// sorted first.
std::vector<OutlierReport> detect_outliers(const ExpressionMatrix& m, double g_factor,
                                           OutlierScope scope,
                                           const std::optional<ClassPartition>& labels = {},
                                           const OutlierOptions& options = {});

// Human-readable table with the row labels "pairs of gene expressions",
// "distance intra-pair", "outlier's benchmark" and "Tukey's constant". Flagged
// samples carry a leading '*'.
void write_outlier_table(std::ostream& out, const std::vector<OutlierReport>& reports);

// scope,class_label,border_index,member_1_column,member_1_id,member_2_column,
// member_2_id,distance,iqr_estimate,benchmark,g_factor,flagged,flagged_sample_ids
void write_outlier_csv(std::ostream& out, const std::vector<OutlierReport>& reports);
std::vector<OutlierReport> read_outlier_csv(std::istream& in);

std::string outliers_to_json(const std::vector<OutlierReport>& reports);

std::string calibration_to_json(const TukeyCalibration& cal);
TukeyCalibration calibration_from_json(const std::string& text);

}  // namespace depthnorm
