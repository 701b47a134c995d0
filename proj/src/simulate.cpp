#include "depthnorm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "depthnorm/error.hpp"
#include "depthnorm/io.hpp"
#include "depthnorm/parallel.hpp"
#include "depthnorm/transforms.hpp"

namespace depthnorm {

void SimulationConfig::validate() const {
  if (n_samples < 4 || n_samples % 2 != 0) {
    throw DomainError("n_samples must be even and at least 4");
  }
  if (n_genes < 1 || probes_per_gene < 1 || n_datasets < 1) {
    throw DomainError("gene, probe and dataset counts must be at least 1");
  }
  if (affected_genes > n_genes) throw DomainError("affected_genes exceeds n_genes");
  if (dfs.empty() || deltas.empty()) throw DomainError("need at least one df and one delta");
  for (const double df : dfs) {
    if (!(df > 0.0)) throw DomainError("degrees of freedom must be positive");
  }
  if (!(distortion_lo <= distortion_hi)) throw DomainError("distortion range is reversed");
  if (!(negative_floor > 0.0)) throw DomainError("negative_floor must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

namespace {

GeneratedDataset generate(const SimulationConfig& cfg, double df, double delta,
                          std::uint64_t dataset_seed, bool distort) {
  cfg.validate();
  const std::size_t probes = cfg.n_genes * cfg.probes_per_gene;
  const std::size_t shifted_probes = cfg.affected_genes * cfg.probes_per_gene;
  const std::size_t n = cfg.n_samples;

  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(dataset_seed),
                    static_cast<std::uint32_t>(dataset_seed >> 32)};
  std::mt19937_64 engine(seq);
  std::student_t_distribution<double> t(df);

  std::vector<double> values(probes * n);
  for (std::size_t j = 0; j < n; ++j) {
    double* col = values.data() + j * probes;
    for (std::size_t p = 0; p < probes; ++p) {
      const double v = cfg.center + t(engine);
      col[p] = v <= 0.0 ? cfg.negative_floor : v;
    }
    if (j < n / 2) {
      for (std::size_t p = 0; p < shifted_probes; ++p) col[p] += delta;
    }
  }

  std::vector<double> exponents(n, cfg.base_power + cfg.distortion_lo);
  if (cfg.distortion_hi > cfg.distortion_lo) {
    std::uniform_real_distribution<double> eps(cfg.distortion_lo, cfg.distortion_hi);
    for (auto& e : exponents) e = cfg.base_power + eps(engine);
  }
  if (distort) {
    for (std::size_t j = 0; j < n; ++j) {
      double* col = values.data() + j * probes;
      for (std::size_t p = 0; p < probes; ++p) col[p] = std::pow(col[p], exponents[j]);
    }
  }

  ExpressionMatrix m(probes, n, std::move(values));
  std::vector<int> labels(n);
  for (std::size_t j = 0; j < n; ++j) labels[j] = j < n / 2 ? 1 : 2;
  m.set_class_labels(std::move(labels));

  std::vector<bool> truth(cfg.n_genes, false);
  std::fill(truth.begin(), truth.begin() + static_cast<std::ptrdiff_t>(cfg.affected_genes), true);
  return {ProbeMatrix::uniform_blocks(std::move(m), cfg.probes_per_gene), std::move(truth),
          std::move(exponents)};
}

ExpressionMatrix log2_transform(const ExpressionMatrix& m) {
  ExpressionMatrix out = m;
  for (std::size_t j = 0; j < out.cols(); ++j) {
    for (auto& v : out.column(j)) v = std::log2(v);
  }
  return out;
}

}  // namespace

GeneratedDataset generate_dataset(const SimulationConfig& cfg, double df, double delta,
                                  std::uint64_t dataset_seed) {
  return generate(cfg, df, delta, dataset_seed, true);
}

ProbeMatrix generate_undistorted(const SimulationConfig& cfg, double df, double delta,
                                 std::uint64_t dataset_seed) {
  return generate(cfg, df, delta, dataset_seed, false).probes;
}

std::string_view to_string(StudyMethod method) noexcept {
  switch (method) {
    case StudyMethod::rma: return "RMA";
    case StudyMethod::fdn_median_polish: return "FDN+median_polish";
    case StudyMethod::fdn_biweight: return "FDN+biweight";
  }
  return "?";
}

StudyMethod parse_study_method(std::string_view name) {
  if (name == "rma" || name == "RMA") return StudyMethod::rma;
  if (name == "fdn-mp" || name == "FDN+median_polish") return StudyMethod::fdn_median_polish;
  if (name == "fdn-biweight" || name == "FDN+biweight") return StudyMethod::fdn_biweight;
  throw UsageError("unknown method '" + std::string(name) + "' (expected rma, fdn-mp, fdn-biweight)");
}

StudyReport run_study(const SimulationConfig& cfg, const std::vector<StudyMethod>& methods_in,
                      const StudyOptions& options) {
  cfg.validate();
  if (methods_in.empty()) throw UsageError("run_study needs at least one method");
  std::vector<StudyMethod> methods = methods_in;
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

  const std::size_t cells = cfg.dfs.size() * cfg.deltas.size();
  const std::size_t jobs = cells * cfg.n_datasets;
  // results[job][method] = (power, false discoveries)
  std::vector<std::vector<PowerSummary>> results(jobs);

  std::vector<int> labels(cfg.n_samples);
  for (std::size_t j = 0; j < labels.size(); ++j) labels[j] = j < cfg.n_samples / 2 ? 1 : 2;
  const ClassPartition groups(labels);

  parallel_for(jobs, [&](std::size_t job) {
    const std::size_t cell = job / cfg.n_datasets;
    const std::size_t dataset = job % cfg.n_datasets;
    const double df = cfg.dfs[cell / cfg.deltas.size()];
    const double delta = cfg.deltas[cell % cfg.deltas.size()];
    const auto data = generate_dataset(cfg, df, delta, dataset);

    std::optional<ProbeMatrix> fdn;
    auto evaluate = [&](const ProbeMatrix& pm, SummaryMethod summary) {
      TestResult tr = two_sample_ttest(summarize_genes(pm, summary, options.summary), groups);
      tr.truth = data.truth;
      return power_false_discovery(tr, cfg.alpha);
    };
    for (const auto method : methods) {
      if (method == StudyMethod::rma) {
        const auto& x = data.probes.values();
        const ReferenceCurve ref(component_wise_median(column_sort(x)),
                                 ReferenceSource::component_median);
        const auto pm = data.probes.with_values(log2_transform(quantile_normalize_full(x, ref)));
        results[job].push_back(evaluate(pm, SummaryMethod::median_polish));
        continue;
      }
      if (!fdn) {
        const auto normalized = normalize_pipeline(data.probes.values(), options.fdn).normalized;
        fdn = data.probes.with_values(log2_transform(normalized));
      }
      results[job].push_back(evaluate(*fdn, method == StudyMethod::fdn_biweight
                                                ? SummaryMethod::biweight
                                                : SummaryMethod::median_polish));
    }
  });

  StudyReport report;
  report.n_datasets = cfg.n_datasets;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    for (std::size_t k = 0; k < methods.size(); ++k) {
      double power = 0.0, fd = 0.0;
      for (std::size_t d = 0; d < cfg.n_datasets; ++d) {
        const auto& r = results[cell * cfg.n_datasets + d][k];
        power += r.power_percent;
        fd += static_cast<double>(r.false_discoveries);
      }
      const auto count = static_cast<double>(cfg.n_datasets);
      report.rows.push_back({cfg.dfs[cell / cfg.deltas.size()], cfg.deltas[cell % cfg.deltas.size()],
                             methods[k], power / count, fd / count});
    }
  }
  return report;
}

void write_study_csv(std::ostream& out, const StudyReport& report) {
  out << "df,delta,method,mean_power_percent,mean_false_discoveries,n_datasets\n";
  for (const auto& r : report.rows) {
    out << format_double(r.df) << ',' << format_double(r.delta) << ',' << to_string(r.method) << ','
        << format_double(r.mean_power) << ',' << format_double(r.mean_false_discoveries) << ','
        << report.n_datasets << '\n';
  }
}

StudyReport read_study_csv(std::istream& in) {
  std::string line;
  std::getline(in, line);
  if (line.rfind("df,delta,method", 0) != 0) throw ParseError("study CSV: unexpected header");
  StudyReport report;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> c;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) c.push_back(cell);
    if (c.size() != 6) throw ParseError("study CSV: row " + std::to_string(line_no) + " malformed");
    try {
      report.rows.push_back({std::stod(c[0]), std::stod(c[1]), parse_study_method(c[2]),
                             std::stod(c[3]), std::stod(c[4])});
      report.n_datasets = static_cast<std::size_t>(std::stoul(c[5]));
    } catch (const std::logic_error&) {
      throw ParseError("study CSV: row " + std::to_string(line_no) + " has an invalid number");
    }
  }
  return report;
}

void write_study_table(std::ostream& out, const StudyReport& report) {
  std::vector<StudyMethod> methods;
  std::vector<std::pair<double, double>> keys;
  std::map<std::tuple<double, double, StudyMethod>, const StudyRow*> index;
  for (const auto& r : report.rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
    if (std::find(keys.begin(), keys.end(), std::pair(r.df, r.delta)) == keys.end()) {
      keys.emplace_back(r.df, r.delta);
    }
    index[{r.df, r.delta, r.method}] = &r;
  }
  std::sort(methods.begin(), methods.end());

  const int w = 19;
  auto cell = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  out << "Mean power (%) | mean false discoveries, over " << report.n_datasets << " datasets\n\n";
  out << std::setw(6) << "df" << std::setw(7) << "delta" << " |";
  for (const auto m : methods) out << std::setw(w) << to_string(m);
  out << " |";
  for (const auto m : methods) out << std::setw(w) << to_string(m);
  out << '\n' << std::string(15 + 2 * (methods.size() * w + 2), '-') << '\n';
  double last_df = std::nan("");
  for (const auto& [df, delta] : keys) {
    if (!std::isnan(last_df) && df != last_df) out << '\n';
    last_df = df;
    out << std::setw(6) << format_double(df) << std::setw(7) << format_double(delta) << " |";
    for (const auto m : methods) {
      const auto it = index.find({df, delta, m});
      out << std::setw(w) << (it == index.end() ? "-" : cell(it->second->mean_power));
    }
    out << " |";
    for (const auto m : methods) {
      const auto it = index.find({df, delta, m});
      out << std::setw(w) << (it == index.end() ? "-" : cell(it->second->mean_false_discoveries));
    }
    out << '\n';
  }
}

void write_simulation_config(std::ostream& out, const SimulationConfig& cfg) {
  auto list = [](const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + format_double(v[k]);
    return s + "]";
  };
  out << "[simulate]\n"
      << "samples = " << cfg.n_samples << '\n'
      << "genes = " << cfg.n_genes << '\n'
      << "probes-per-gene = " << cfg.probes_per_gene << '\n'
      << "df = " << list(cfg.dfs) << '\n'
      << "delta = " << list(cfg.deltas) << '\n'
      << "affected-genes = " << cfg.affected_genes << '\n'
      << "distortion-lo = " << format_double(cfg.distortion_lo) << '\n'
      << "distortion-hi = " << format_double(cfg.distortion_hi) << '\n'
      << "base-power = " << format_double(cfg.base_power) << '\n'
      << "center = " << format_double(cfg.center) << '\n'
      << "negative-floor = " << format_double(cfg.negative_floor) << '\n'
      << "datasets = " << cfg.n_datasets << '\n'
      << "seed = " << cfg.seed << '\n'
      << "alpha = " << format_double(cfg.alpha) << '\n';
}

}  // namespace depthnorm
