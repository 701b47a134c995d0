// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "depthnorm/depth.hpp"
#include "depthnorm/error.hpp"
#include "depthnorm/normalize.hpp"
#include "depthnorm/outlier.hpp"
#include "depthnorm/parallel.hpp"
#include "depthnorm/simulate.hpp"
#include "depthnorm/stats.hpp"
#include "depthnorm/summarize.hpp"
#include "depthnorm/transforms.hpp"
#include "support.hpp"

using namespace depthnorm;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = limit_s <= 0.0 || secs < limit_s;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  std::printf("%s  %2d  %-36s %10.4f s", pass ? "PASS" : "FAIL", id, title, secs);
  if (limit_s > 0.0) std::printf(" (limit %g s)", limit_s);
  if (!o.detail.empty()) std::printf("  %s", o.detail.c_str());
  std::printf("\n");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// 1
Outcome worked_example() {
  const auto m = testing::scalar_sample({1.3, 2.1, 2.8, 2.9, 3.2, 3.9, 4.1, 4.8, 4.9, 5.3});
  const auto bs = extract_borders(pairwise_distances(m));
  const std::array<double, 5> want{4, 2.8, 2, 1.2, 0.7};
  const auto d = bs.distances();
  bool ok = d.size() == 5;
  for (std::size_t k = 0; ok && k < 5; ++k) ok = std::abs(d[k] - want[k]) <= 1e-12;
  const double iqr = robust_iqr(bs);
  ok = ok && iqr == 2.0;
  return {ok, fmt("robust_iqr=%.17g", iqr)};
}

// 2
Outcome border_oracle() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> n_dist(2, 12), g_dist(1, 50);
  int mismatches = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = n_dist(rng), g = g_dist(rng);
    // Every third matrix has small integer entries so that distance ties occur.
    const auto m = t % 3 == 2 ? testing::random_integer_matrix(rng, g, n, 0, 2)
                              : testing::random_matrix(rng, g, n);
    const auto dm = pairwise_distances(m);
    if (extract_borders(dm).borders() != testing::rescan_borders(dm)) ++mismatches;
  }
  return {mismatches == 0, fmt("%.0f mismatches in 200", mismatches)};
}

// 3
Outcome quantile_invariants() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> r_dist(5, 200), c_dist(2, 10);
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    const auto m = testing::random_tie_free(rng, r_dist(rng), c_dist(rng));
    const auto ref = deepest_curve(column_sort(m));
    const auto q = quantile_normalize_full(m, ref);
    bool ok = quantile_normalize_full(q, ref) == q;
    for (std::size_t j = 0; ok && j < m.cols(); ++j) {
      std::vector<double> s(q.column(j).begin(), q.column(j).end());
      ok = stats::average_ranks(s) == stats::average_ranks(m.column(j));
      std::sort(s.begin(), s.end());
      ok = ok && s == testing::vec(ref.values());
    }
    if (!ok) ++bad;
  }
  return {bad == 0, fmt("%.0f failing matrices in 100", bad)};
}

// 4
Outcome median_pathology() {
  const std::vector<std::array<double, 3>> pts{{0, 1, 0}, {0, 0, 0}, {1, 0, 0}, {1, 2, 5}, {3, 1, 5}};
  std::vector<std::vector<double>> cols;
  for (const auto& p : pts) cols.emplace_back(p.begin(), p.end());
  const auto m = ExpressionMatrix::from_columns(cols);
  const auto med = component_wise_median(m);
  const bool med_ok = med == std::vector<double>{1, 1, 0};

  // Hull membership: lambda >= 0, sum lambda = 1, sum lambda_i p_i = med. Any
  // feasible point has a basic solution on 4 of the 5 vertices.
  double best_min_lambda = -INFINITY;
  for (std::size_t skip = 0; skip < 5; ++skip) {
    Eigen::Matrix4d a;
    Eigen::Vector4d b(med[0], med[1], med[2], 1.0);
    int c = 0;
    for (std::size_t k = 0; k < 5; ++k) {
      if (k == skip) continue;
      a.col(c++) << pts[k][0], pts[k][1], pts[k][2], 1.0;
    }
    Eigen::FullPivLU<Eigen::Matrix4d> lu(a);
    if (!lu.isInvertible()) continue;
    const Eigen::Vector4d lambda = lu.solve(b);
    best_min_lambda = std::max(best_min_lambda, lambda.minCoeff());
  }
  const bool outside = best_min_lambda < -1e-9;
  // Separating hyperplane x + y - z: at most 1 on the points, 2 at the median.
  double hmax = -INFINITY;
  for (const auto& p : pts) hmax = std::max(hmax, p[0] + p[1] - p[2]);
  const bool separated = med[0] + med[1] - med[2] > hmax + 1e-9;

  const auto bs = extract_borders(pairwise_distances(m));
  const auto deep = deepest_element(m, bs);
  bool member = false;
  for (const auto& c : cols) member = member || c == deep;
  const auto sorted = column_sort(m);
  const auto curve = deepest_curve(sorted);
  bool curve_member = false;
  for (std::size_t j = 0; j < sorted.cols(); ++j) {
    curve_member = curve_member ||
                   std::equal(curve.values().begin(), curve.values().end(), sorted.column(j).begin());
  }
  return {med_ok && outside && separated && member && curve_member,
          fmt("best basic min(lambda)=%.3g, deepest=(%.0f,%.0f,", best_min_lambda, deep[0], deep[1]) +
              fmt("%.0f)", deep[2])};
}

// 5
Outcome tukey_reduction() {
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> n_dist(3, 40), a_dist(0, 60), c_dist(-100, 100), g_dist(4, 16);
  int disagreements = 0, flagged = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = n_dist(rng);
    const double c = c_dist(rng);
    std::vector<double> xs;
    for (int k = 0; k < n / 2; ++k) {
      const double a = a_dist(rng);
      xs.push_back(c - a);
      xs.push_back(c + a);
    }
    if (n % 2 == 1) xs.push_back(c);
    // One outlying magnitude in half of the samples.
    if (t % 2 == 0 && xs.size() >= 2) {
      xs[0] = c - 400;
      xs[1] = c + 400;
    }
    const double g_factor = g_dist(rng) / 4.0;
    const auto m = column_sort(testing::scalar_sample(xs));
    std::vector<std::size_t> all(xs.size());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
    OutlierReport r;
    try {
      r = detect_in_scope(m, all, g_factor, std::nullopt);
    } catch (const Error&) {
      ++disagreements;
      continue;
    }
    const bool pair_rule = r.pairs.front().flagged;

    const auto [q1, q3] = testing::hinges(xs);
    const double g = (g_factor - 1.0) / 2.0;
    const double lo = *std::min_element(xs.begin(), xs.end());
    const double hi = *std::max_element(xs.begin(), xs.end());
    const bool fence_rule = hi > q3 + g * (q3 - q1) || lo < q1 - g * (q3 - q1);
    if (pair_rule != fence_rule) ++disagreements;
    flagged += fence_rule;
  }
  return {disagreements == 0, fmt("%.0f disagreements, %.0f/50 flagged", disagreements, flagged)};
}

// 6
TukeyCalibration run_calibration() {
  CalibrationSettings s;
  s.target_rate = 1e-4;
  s.replicates = 100;
  s.seed = kDefaultSeed;
  return calibrate_g(12, 2000, Covariance::identity(12), s);
}

// 7
Outcome median_polish_identity() {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal(7.0, 3.0);
  std::uniform_int_distribution<int> eff(-64, 64);
  double worst = 0.0;
  bool zeros = true;
  for (int b = 0; b < 100; ++b) {
    TwoWayTable t{11, 12, std::vector<double>(132)};
    for (auto& x : t.values) x = normal(rng);
    const auto mp = median_polish(t);
    for (std::size_t i = 0; i < 11; ++i)
      for (std::size_t j = 0; j < 12; ++j) {
        const double fit = mp.overall + mp.row_effects[i] + mp.col_effects[j] + mp.residuals(i, j);
        worst = std::max(worst, std::abs(fit - t(i, j)));
      }

    TwoWayTable add{11, 12, std::vector<double>(132)};
    std::vector<double> r(11), c(12);
    for (auto& x : r) x = eff(rng) / 4.0;
    for (auto& x : c) x = eff(rng) / 4.0;
    for (std::size_t i = 0; i < 11; ++i)
      for (std::size_t j = 0; j < 12; ++j) add(i, j) = r[i] + c[j];
    for (double x : median_polish(add).residuals.values) zeros = zeros && x == 0.0;
  }
  return {worst <= 1e-9 && zeros, fmt("max reconstruction error %.3g", worst)};
}

// 8
Outcome null_rejection() {
  std::mt19937_64 rng(88);
  std::normal_distribution<double> normal;
  const std::size_t genes = 10000;
  std::vector<double> v(genes * 12);
  for (auto& x : v) x = normal(rng);
  const ExpressionMatrix gm(genes, 12, std::move(v));
  const auto tr = two_sample_ttest(gm, ClassPartition({1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2}));
  const auto rejected = std::count_if(tr.p_value.begin(), tr.p_value.end(), [](double p) { return p < 0.05; });
  const double rate = static_cast<double>(rejected) / static_cast<double>(genes);
  return {std::abs(rate - 0.05) <= 0.01, fmt("rejection rate %.4f", rate)};
}

// 9
StudyReport run_table_study() {
  SimulationConfig cfg;
  cfg.dfs = {10.0};
  cfg.n_datasets = 20;
  return run_study(cfg, {StudyMethod::rma, StudyMethod::fdn_median_polish, StudyMethod::fdn_biweight});
}

Outcome check_study(const StudyReport& rep) {
  const std::vector<StudyMethod> methods{StudyMethod::rma, StudyMethod::fdn_median_polish,
                                         StudyMethod::fdn_biweight};
  const std::vector<double> deltas{0.0, 0.25, 0.5, 1.0, 2.0};
  auto power = [&](StudyMethod m, double d) {
    for (const auto& r : rep.rows)
      if (r.method == m && r.delta == d) return r.mean_power;
    throw std::runtime_error("missing study row");
  };
  bool ok = rep.rows.size() == 15;
  std::string detail;
  for (auto m : methods) {
    const double p0 = power(m, 0.0);
    ok = ok && p0 >= 3.0 && p0 <= 8.0;
    ok = ok && power(m, 2.0) >= 98.0;
    for (std::size_t k = 1; k < deltas.size(); ++k) ok = ok && power(m, deltas[k]) >= power(m, deltas[k - 1]) - 1.5;
    detail += std::string(to_string(m)) + fmt(" %.2f..%.2f ", p0, power(m, 2.0));
  }
  double gap = 0.0;
  for (double d : deltas)
    for (auto m : {StudyMethod::fdn_median_polish, StudyMethod::fdn_biweight})
      gap = std::max(gap, std::abs(power(m, d) - power(StudyMethod::rma, d)));
  ok = ok && gap <= 5.0;
  return {ok, detail + fmt("max |FDN-RMA| %.2f", gap)};
}

std::string study_csv(const StudyReport& r) {
  std::ostringstream out;
  write_study_csv(out, r);
  return out.str();
}

}  // namespace

int main() {
  report(1, "worked example exactness", 1e-3, worked_example);
  report(2, "border extraction vs rescan oracle", 5.0, border_oracle);
  report(3, "quantile normalization invariants", 2.0, quantile_invariants);
  report(4, "component-wise median pathology", 0.0, median_pathology);
  report(5, "Tukey fence reduction", 0.0, tukey_reduction);

  set_thread_count(1);
  TukeyCalibration cal;
  report(6, "calibration band (1 thread)", 60.0, [&] {
    cal = run_calibration();
    return Outcome{cal.g_factor >= 1.0 && cal.g_factor <= 1.6, fmt("g_factor=%.6f", cal.g_factor)};
  });
  set_thread_count(0);

  report(7, "median polish reconstruction", 1.0, median_polish_identity);
  report(8, "null rejection rate", 5.0, null_rejection);

  StudyReport study;
  report(9, "power study structure", 600.0, [&] {
    study = run_table_study();
    return check_study(study);
  });

  report(10, "determinism of 6 and 9", 0.0, [&] {
    set_thread_count(3);
    const auto cal2 = run_calibration();
    const auto study2 = run_table_study();
    set_thread_count(0);
    const bool same_cal = calibration_to_json(cal) == calibration_to_json(cal2);
    const bool same_study = study_csv(study) == study_csv(study2);
    return Outcome{same_cal && same_study,
                   std::string("calibration ") + (same_cal ? "identical" : "differs") + ", study " +
                       (same_study ? "identical" : "differs")};
  });

  std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
