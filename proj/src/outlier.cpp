#include "depthnorm/outlier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "depthnorm/error.hpp"
#include "depthnorm/io.hpp"
#include "depthnorm/kernels.hpp"
#include "depthnorm/parallel.hpp"
#include "depthnorm/stats.hpp"
#include "depthnorm/transforms.hpp"

namespace depthnorm {

Covariance Covariance::identity(std::size_t n) {
  Covariance c{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) c(i, i) = 1.0;
  return c;
}

double robust_iqr(const BorderSequence& bs) { return stats::median(bs.distances()); }

std::vector<double> border_ratios(const BorderSequence& bs) {
  const double iqr = robust_iqr(bs);
  if (!(iqr > 0.0)) throw NumericError("robust IQR estimate is 0; border ratios are undefined");
  std::vector<double> ratios(bs.sample_count());
  for (const auto& b : bs.borders()) {
    ratios[b.first] = b.distance / iqr;
    if (b.second) ratios[*b.second] = b.distance / iqr;
  }
  return ratios;
}

Covariance repair_psd(const Covariance& cov) {
  const std::size_t n = cov.n;
  if (cov.values.size() != n * n || n == 0) throw DimensionError("covariance is not square");
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(cov(i, j))) throw NumericError("covariance has a non-finite entry");
      a(i, j) = (cov(i, j) + cov(j, i)) / 2.0;
    }
    if (a(i, i) < 0.0) throw NumericError("covariance has a negative variance");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericError("eigen-decomposition failed");
  const Eigen::VectorXd lambda = solver.eigenvalues();
  if (lambda.minCoeff() < 0.0) {
    const Eigen::MatrixXd& v = solver.eigenvectors();
    const Eigen::MatrixXd clipped = v * lambda.cwiseMax(0.0).asDiagonal() * v.transpose();
    Eigen::VectorXd rescale(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      if (a(k, k) == 0.0) {
        rescale(k) = 0.0;
      } else if (clipped(k, k) > 0.0) {
        rescale(k) = std::sqrt(a(k, k) / clipped(k, k));
      } else {
        throw NumericError("covariance repair lost the variance of sample " + std::to_string(i + 1));
      }
    }
    a = rescale.asDiagonal() * clipped * rescale.asDiagonal();
  }

  Covariance out{n, std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

Covariance robust_covariance(const ExpressionMatrix& m) {
  const std::size_t n = m.cols();
  const std::size_t g = m.rows();
  if (g < 3) throw DimensionError("robust covariance needs at least 3 rows");

  std::vector<double> scale(n);
  std::vector<std::vector<double>> centred_ranks(n);
  std::vector<double> rank_norm(n);
  for (std::size_t j = 0; j < n; ++j) {
    scale[j] = 1.4826 * stats::mad(m.column(j));
    if (!(scale[j] > 0.0)) {
      throw DegenerateScaleError("sample " + m.sample_ids()[j] + " has zero MAD");
    }
    auto ranks = stats::average_ranks(m.column(j));
    const double centre = (static_cast<double>(g) + 1.0) / 2.0;
    double ss = 0.0;
    for (auto& r : ranks) {
      r -= centre;
      ss += r * r;
    }
    centred_ranks[j] = std::move(ranks);
    rank_norm[j] = std::sqrt(ss);
  }

  Covariance cov{n, std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    cov(i, i) = scale[i] * scale[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < g; ++k) dot += centred_ranks[i][k] * centred_ranks[j][k];
      const double rho = std::clamp(dot / (rank_norm[i] * rank_norm[j]), -1.0, 1.0);
      const double corr = 2.0 * std::sin(std::numbers::pi * rho / 6.0);
      cov(i, j) = cov(j, i) = scale[i] * scale[j] * corr;
    }
  }
  return repair_psd(cov);
}

TukeyCalibration calibrate_g(std::size_t samples, std::size_t features, const Covariance& cov,
                             const CalibrationSettings& settings) {
  if (samples < 2) throw DimensionError("calibration needs at least 2 samples");
  if (features < 1) throw DimensionError("calibration needs at least 1 feature");
  if (cov.n != samples) throw DimensionError("covariance size does not match the sample count");
  if (!(settings.target_rate > 0.0 && settings.target_rate < 1.0)) {
    throw DomainError("target rate must lie in (0, 1)");
  }
  if (settings.replicates < 1) throw DomainError("calibration needs at least 1 replicate");

  const Covariance repaired = repair_psd(cov);
  Eigen::MatrixXd a(samples, samples);
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t j = 0; j < samples; ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = repaired(i, j);
    }
  }
  // Factor with a = L L^T; eigen form tolerates singular covariances.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  const Eigen::MatrixXd factor =
      solver.eigenvectors() * solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  const auto rows = static_cast<Eigen::Index>(features);
  const auto cols = static_cast<Eigen::Index>(samples);
  const double level = 1.0 - settings.target_rate;

  std::vector<double> quantiles(settings.replicates);
  parallel_for(settings.replicates, [&](std::size_t r) {
    std::seed_seq seq{static_cast<std::uint32_t>(settings.seed),
                      static_cast<std::uint32_t>(settings.seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 engine(seq);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd z(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) z(i, j) = normal(engine);
    }
    const Eigen::MatrixXd x = z * factor.transpose();
    ExpressionMatrix simulated(features, samples, std::vector<double>(x.data(), x.data() + x.size()));
    const ExpressionMatrix sorted = column_sort(simulated);
    const auto borders = extract_borders(pairwise_distances(sorted));
    auto ratios = border_ratios(borders);
    std::sort(ratios.begin(), ratios.end());
    quantiles[r] = stats::quantile_sorted(ratios, level);
  });

  TukeyCalibration cal;
  cal.g_factor = stats::median(quantiles);
  cal.target_rate = settings.target_rate;
  cal.replicates = settings.replicates;
  cal.seed = settings.seed;
  cal.samples = samples;
  cal.features = features;
  cal.per_replicate_quantiles = std::move(quantiles);
  return cal;
}

std::string OutlierReport::scope_name() const {
  return class_label ? "class " + std::to_string(*class_label) : "global";
}

std::size_t farther_member(const ExpressionMatrix& m, std::size_t a, std::size_t b,
                           std::span<const double> reference) {
  const double da = kernels::squared_distance(m.column(a), reference);
  const double db = kernels::squared_distance(m.column(b), reference);
  return db > da ? b : a;
}

OutlierReport detect_in_scope(const ExpressionMatrix& sorted, std::span<const std::size_t> columns,
                              double g_factor, std::optional<int> class_label,
                              const OutlierOptions& options) {
  if (columns.size() < 2) throw PartitionError("an outlier scope needs at least 2 samples");
  if (!(g_factor >= 0.0)) throw DomainError("Tukey factor must be non-negative");
  const ExpressionMatrix scope = select_columns(sorted, columns);
  const auto borders = extract_borders(pairwise_distances(scope));
  const auto deepest = deepest_element(scope, borders);

  OutlierReport report;
  report.class_label = class_label;
  report.iqr_estimate = robust_iqr(borders);
  report.g_factor = g_factor;
  report.benchmark = g_factor * report.iqr_estimate;

  bool scanning = true;
  for (const auto& b : borders.borders()) {
    ReportPair pair;
    pair.distance = b.distance;
    if (b.second) {
      const std::size_t outer = farther_member(scope, b.first, *b.second, deepest);
      const std::size_t inner = outer == b.first ? *b.second : b.first;
      pair.outer = columns[outer];
      pair.inner = columns[inner];
      pair.inner_id = sorted.sample_ids()[*pair.inner];
    } else {
      pair.outer = columns[b.first];
    }
    pair.outer_id = sorted.sample_ids()[pair.outer];

    scanning = scanning && pair.inner.has_value() && b.distance > report.benchmark;
    if (scanning) {
      pair.flagged = true;
      ++report.flagged_pairs;
      if (options.flag_both_members) {
        report.flagged_samples.push_back({pair.outer, pair.outer_id, FlagRule::both_members});
        report.flagged_samples.push_back({*pair.inner, pair.inner_id, FlagRule::both_members});
      } else {
        report.flagged_samples.push_back({pair.outer, pair.outer_id, FlagRule::farther_from_deepest});
      }
    }
    report.pairs.push_back(std::move(pair));
  }
  return report;
}

std::vector<OutlierReport> detect_outliers(const ExpressionMatrix& m, double g_factor,
                                           OutlierScope scope,
                                           const std::optional<ClassPartition>& labels,
                                           const OutlierOptions& options) {
  const ExpressionMatrix sorted = m.sorted() ? m : column_sort(m);
  std::vector<OutlierReport> reports;
  if (scope == OutlierScope::global) {
    std::vector<std::size_t> all(m.cols());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
    reports.push_back(detect_in_scope(sorted, all, g_factor, std::nullopt, options));
    return reports;
  }
  if (!labels) throw PartitionError("per-class outlier detection needs class labels");
  if (labels->size() != m.cols()) {
    throw PartitionError("got " + std::to_string(labels->size()) + " class labels for " +
                         std::to_string(m.cols()) + " samples");
  }
  for (int k = 1; k <= labels->class_count(); ++k) {
    const auto members = labels->members(k);
    reports.push_back(detect_in_scope(sorted, members, g_factor, k, options));
  }
  return reports;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string_view rule_name(FlagRule rule) {
  return rule == FlagRule::both_members ? "both_members" : "farther_from_deepest";
}

}  // namespace

void write_outlier_table(std::ostream& out, const std::vector<OutlierReport>& reports) {
  const std::vector<std::string> labels{"pairs of gene", "expressions", "distance intra-pair",
                                        "outlier's benchmark", "Tukey's constant"};
  std::size_t label_width = 0;
  for (const auto& l : labels) label_width = std::max(label_width, l.size());

  for (const auto& report : reports) {
    std::vector<std::array<std::string, 3>> cells;
    std::size_t width = 0;
    for (const auto& p : report.pairs) {
      const bool outer_flagged = std::any_of(
          report.flagged_samples.begin(), report.flagged_samples.end(),
          [&](const FlaggedSample& f) { return f.column == p.outer; });
      const bool inner_flagged = p.inner && std::any_of(
          report.flagged_samples.begin(), report.flagged_samples.end(),
          [&](const FlaggedSample& f) { return f.column == *p.inner; });
      std::array<std::string, 3> c{(outer_flagged ? "*" : "") + p.outer_id,
                                   p.inner ? (inner_flagged ? "*" : "") + p.inner_id : "-",
                                   (p.flagged ? "*" : "") + fixed(p.distance, 1)};
      for (const auto& s : c) width = std::max(width, s.size());
      cells.push_back(std::move(c));
    }
    width += 2;

    out << std::string(label_width, ' ') << " | " << report.scope_name() << '\n';
    out << std::string(label_width + 3 + cells.size() * width, '-') << '\n';
    for (int row = 0; row < 3; ++row) {
      const std::string& label = row == 0 ? labels[0] : row == 1 ? labels[1] : labels[2];
      if (row == 2) out << '\n';
      out << std::setw(static_cast<int>(label_width)) << label << " |";
      for (const auto& c : cells) out << std::setw(static_cast<int>(width)) << c[static_cast<std::size_t>(row)];
      out << '\n';
    }
    out << '\n';
    out << std::setw(static_cast<int>(label_width)) << labels[3] << " | "
        << fixed(report.benchmark, 1) << '\n';
    out << std::setw(static_cast<int>(label_width)) << labels[4] << " | "
        << fixed(report.g_factor, 2) << '\n';
    out << "flagged: ";
    if (report.flagged_samples.empty()) out << "none";
    for (std::size_t k = 0; k < report.flagged_samples.size(); ++k) {
      out << (k ? ", " : "") << report.flagged_samples[k].id;
    }
    out << "\n\n";
  }
}

void write_outlier_csv(std::ostream& out, const std::vector<OutlierReport>& reports) {
  out << "scope,class_label,border_index,member_1_column,member_1_id,member_2_column,member_2_id,"
         "distance,iqr_estimate,benchmark,g_factor,flagged,flagged_sample_ids\n";
  for (const auto& r : reports) {
    for (std::size_t k = 0; k < r.pairs.size(); ++k) {
      const auto& p = r.pairs[k];
      std::string flagged_ids;
      for (const auto& f : r.flagged_samples) {
        if (f.column == p.outer || (p.inner && f.column == *p.inner)) {
          flagged_ids += (flagged_ids.empty() ? "" : ";") + f.id;
        }
      }
      out << (r.class_label ? "class" : "global") << ','
          << (r.class_label ? std::to_string(*r.class_label) : "") << ',' << k + 1 << ','
          << p.outer + 1 << ',' << p.outer_id << ','
          << (p.inner ? std::to_string(*p.inner + 1) : "") << ',' << p.inner_id << ','
          << format_double(p.distance) << ',' << format_double(r.iqr_estimate) << ','
          << format_double(r.benchmark) << ',' << format_double(r.g_factor) << ','
          << (p.flagged ? 1 : 0) << ',' << flagged_ids << '\n';
    }
  }
}

std::vector<OutlierReport> read_outlier_csv(std::istream& in) {
  auto split = [](const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, delim)) cells.push_back(cell);
    if (!line.empty() && line.back() == delim) cells.emplace_back();
    return cells;
  };
  auto number = [](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw ParseError("");
      return v;
    } catch (const std::exception&) {
      throw ParseError("outlier CSV: invalid number '" + s + "'");
    }
  };

  std::vector<OutlierReport> reports;
  std::string line;
  std::getline(in, line);
  if (line.rfind("scope,class_label,border_index", 0) != 0) {
    throw ParseError("outlier CSV: unexpected header");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c = split(line, ',');
    if (c.size() != 13) {
      throw ParseError("outlier CSV: row " + std::to_string(line_no) + " has " +
                       std::to_string(c.size()) + " fields, expected 13");
    }
    const std::optional<int> label =
        c[0] == "class" ? std::optional<int>(static_cast<int>(number(c[1]))) : std::nullopt;
    if (c[2] == "1") {
      OutlierReport r;
      r.class_label = label;
      r.iqr_estimate = number(c[8]);
      r.benchmark = number(c[9]);
      r.g_factor = number(c[10]);
      reports.push_back(std::move(r));
    }
    if (reports.empty()) throw ParseError("outlier CSV: rows before the first border");
    auto& r = reports.back();
    ReportPair p;
    p.outer = static_cast<std::size_t>(number(c[3])) - 1;
    p.outer_id = c[4];
    if (!c[5].empty()) p.inner = static_cast<std::size_t>(number(c[5])) - 1;
    p.inner_id = c[6];
    p.distance = number(c[7]);
    p.flagged = c[11] == "1";
    if (p.flagged) {
      ++r.flagged_pairs;
      const auto ids = split(c[12], ';');
      const FlagRule rule = ids.size() == 2 ? FlagRule::both_members : FlagRule::farther_from_deepest;
      for (const auto& id : ids) {
        const std::size_t column = (p.inner && id == p.inner_id && id != p.outer_id) ? *p.inner : p.outer;
        r.flagged_samples.push_back({column, id, rule});
      }
    }
    r.pairs.push_back(std::move(p));
  }
  return reports;
}

std::string outliers_to_json(const std::vector<OutlierReport>& reports) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["scope"] = r.class_label ? "class" : "global";
    j["class_label"] = r.class_label ? nlohmann::json(*r.class_label) : nlohmann::json(nullptr);
    j["iqr_estimate"] = r.iqr_estimate;
    j["g_factor"] = r.g_factor;
    j["benchmark"] = r.benchmark;
    j["flagged_pairs"] = r.flagged_pairs;
    auto& flagged = j["flagged_samples"] = nlohmann::json::array();
    for (const auto& f : r.flagged_samples) {
      flagged.push_back({{"id", f.id}, {"column", f.column + 1}, {"rule", rule_name(f.rule)}});
    }
    auto& pairs = j["pairs"] = nlohmann::json::array();
    for (const auto& p : r.pairs) {
      nlohmann::json members = nlohmann::json::array({p.outer_id});
      if (p.inner) members.push_back(p.inner_id);
      pairs.push_back({{"members", members}, {"distance", p.distance}, {"flagged", p.flagged}});
    }
    doc.push_back(std::move(j));
  }
  return doc.dump(2);
}

std::string calibration_to_json(const TukeyCalibration& cal) {
  const nlohmann::json j{{"g_factor", cal.g_factor},
                         {"target_rate", cal.target_rate},
                         {"replicates", cal.replicates},
                         {"seed", cal.seed},
                         {"samples", cal.samples},
                         {"features", cal.features},
                         {"per_replicate_quantiles", cal.per_replicate_quantiles}};
  return j.dump(2);
}

TukeyCalibration calibration_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    TukeyCalibration cal;
    cal.g_factor = j.at("g_factor").get<double>();
    cal.target_rate = j.at("target_rate").get<double>();
    cal.replicates = j.at("replicates").get<std::size_t>();
    cal.seed = j.at("seed").get<std::uint64_t>();
    cal.samples = j.value("samples", std::size_t{0});
    cal.features = j.value("features", std::size_t{0});
    cal.per_replicate_quantiles = j.at("per_replicate_quantiles").get<std::vector<double>>();
    return cal;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("calibration JSON: ") + e.what());
  }
}

}  // namespace depthnorm
