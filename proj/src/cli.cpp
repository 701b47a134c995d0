#include "depthnorm/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "depthnorm/depth.hpp"
#include "depthnorm/error.hpp"
#include "depthnorm/io.hpp"
#include "depthnorm/normalize.hpp"
#include "depthnorm/outlier.hpp"
#include "depthnorm/parallel.hpp"
#include "depthnorm/simulate.hpp"
#include "depthnorm/svg.hpp"
#include "depthnorm/transforms.hpp"

namespace depthnorm::cli {

namespace fs = std::filesystem;

namespace {

struct InputOptions {
  std::string path;
  std::string format;  // empty: from extension
  bool no_header = false;
  std::string prenorm = "median";
  std::optional<std::size_t> max_zeros;

  void add_to(CLI::App& app) {
    app.add_option("--input", path, "Feature x sample table")->required()->check(CLI::ExistingFile);
    app.add_option("--format", format, "csv or tsv (default: from extension)")
        ->check(CLI::IsMember({"csv", "tsv"}));
    app.add_flag("--no-header", no_header, "First row holds data, not sample ids");
    app.add_option("--prenorm", prenorm, "Linear prenormalization anchor")
        ->check(CLI::IsMember({"none", "median", "q75", "mean", "sum"}))
        ->capture_default_str();
    app.add_option("--max-zeros", max_zeros, "Drop rows with more zero entries than this");
  }

  ExpressionMatrix load() const {
    const TableFormat fmt = format.empty()   ? format_from_extension(path)
                            : format == "tsv" ? TableFormat::tsv
                                              : TableFormat::csv;
    auto m = load_matrix(path, fmt, !no_header);
    if (max_zeros) m = filter_zero_rows(m, *max_zeros);
    return m;
  }

  std::optional<Anchor> anchor() const {
    if (prenorm == "none") return std::nullopt;
    return parse_anchor(prenorm);
  }

  // Prenormalized, unsorted.
  ExpressionMatrix prepared() const {
    auto m = load();
    if (const auto a = anchor()) m = linear_prenormalize(m, *a);
    return m;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
}

std::optional<ClassPartition> read_partition(const std::string& classes_path,
                                             const std::vector<int>& inline_labels,
                                             std::size_t columns) {
  std::vector<int> labels;
  if (!classes_path.empty()) {
    labels = load_labels(classes_path);
  } else if (!inline_labels.empty()) {
    labels = inline_labels;
  } else {
    return std::nullopt;
  }
  if (labels.size() != columns) {
    throw PartitionError("got " + std::to_string(labels.size()) + " class labels for " +
                         std::to_string(columns) + " samples");
  }
  return ClassPartition(std::move(labels));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Depth-based normalization and outlier detection for expression matrices",
               "depthnorm"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML-style key = value configuration file");
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: hardware concurrency)");
  std::string output_dir = ".";
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output-dir", output_dir, "Directory for written artifacts")
        ->capture_default_str();
  };

  // normalize
  auto* normalize = app.add_subcommand("normalize", "Quantile-normalize columns to a reference");
  InputOptions norm_in;
  norm_in.add_to(*normalize);
  std::string reference = "deepest";
  std::string mode = "full";
  std::size_t quantiles = 100;
  std::string boxplot_svg;
  normalize->add_option("--reference", reference, "deepest or median")
      ->check(CLI::IsMember({"deepest", "median"}))
      ->capture_default_str();
  normalize->add_option("--mode", mode, "full or subset")
      ->check(CLI::IsMember({"full", "subset"}))
      ->capture_default_str();
  normalize->add_option("--quantiles", quantiles, "Number of quantile intervals in subset mode")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  normalize->add_option("--boxplot-svg", boxplot_svg, "Write log(x+1) boxplots of the result");
  add_output(normalize);

  // depth
  auto* depth = app.add_subcommand("depth", "Functional depth of every sample");
  InputOptions depth_in;
  depth_in.add_to(*depth);
  bool no_sort = false;
  std::string curves_svg;
  depth->add_flag("--no-sort", no_sort, "Use columns as given instead of sorted");
  depth->add_option("--curves-svg", curves_svg, "Write depth-coloured sorted curves");
  add_output(depth);

  // outliers
  auto* outliers = app.add_subcommand("outliers", "Depth-ordered Tukey outlier detection");
  InputOptions out_in;
  out_in.add_to(*outliers);
  std::string classes_path;
  std::vector<int> inline_labels;
  CalibrationSettings cal_settings;
  std::optional<double> g_factor;
  std::string calibration_path;
  bool both_members = false;
  auto* classes_opt =
      outliers->add_option("--classes", classes_path, "One class label per line")->check(CLI::ExistingFile);
  outliers->add_option("--labels", inline_labels, "Class labels in column order")
      ->delimiter(',')
      ->excludes(classes_opt);
  outliers->add_option("--target-rate", cal_settings.target_rate, "Calibration flag rate")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  outliers->add_option("--replicates", cal_settings.replicates, "Monte-Carlo replicates")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  outliers->add_option("--seed", cal_settings.seed, "Calibration seed")->capture_default_str();
  auto* g_opt = outliers->add_option("--g-factor", g_factor, "Use this Tukey factor, skip calibration")
                    ->check(CLI::NonNegativeNumber);
  outliers->add_option("--calibration", calibration_path, "Tukey factor from a calibration JSON")
      ->check(CLI::ExistingFile)
      ->excludes(g_opt);
  outliers->add_flag("--both-members", both_members, "Flag both members of an outlying pair");
  add_output(outliers);

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "Monte-Carlo estimate of the Tukey factor");
  std::string cal_input;
  std::string cal_format;
  bool cal_no_header = false;
  std::string cal_prenorm = "median";
  std::size_t cal_samples = 0, cal_features = 0;
  CalibrationSettings cal_only;
  auto* cal_input_opt = calibrate->add_option("--input", cal_input, "Match n, G and covariance of this table")
                            ->check(CLI::ExistingFile);
  calibrate->add_option("--format", cal_format)->check(CLI::IsMember({"csv", "tsv"}));
  calibrate->add_flag("--no-header", cal_no_header);
  calibrate->add_option("--prenorm", cal_prenorm)
      ->check(CLI::IsMember({"none", "median", "q75", "mean", "sum"}))
      ->capture_default_str();
  auto* samples_opt = calibrate->add_option("--samples", cal_samples, "Sample count (identity covariance)")
                          ->excludes(cal_input_opt);
  auto* features_opt = calibrate->add_option("--features", cal_features, "Feature count (identity covariance)")
                           ->excludes(cal_input_opt);
  samples_opt->needs(features_opt);
  features_opt->needs(samples_opt);
  calibrate->add_option("--target-rate", cal_only.target_rate)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  calibrate->add_option("--replicates", cal_only.replicates)->check(CLI::PositiveNumber)->capture_default_str();
  calibrate->add_option("--seed", cal_only.seed)->capture_default_str();
  add_output(calibrate);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Synthetic RMA vs depth-normalization study");
  SimulationConfig sim;
  std::vector<std::string> method_names{"rma", "fdn-mp", "fdn-biweight"};
  simulate->add_option("--samples", sim.n_samples)->capture_default_str();
  simulate->add_option("--genes", sim.n_genes)->capture_default_str();
  simulate->add_option("--probes-per-gene", sim.probes_per_gene)->capture_default_str();
  simulate->add_option("--df", sim.dfs, "Degrees of freedom of the t noise")->capture_default_str();
  simulate->add_option("--delta", sim.deltas, "Shift(s) of the affected genes")->capture_default_str();
  simulate->add_option("--affected-genes", sim.affected_genes)->capture_default_str();
  simulate->add_option("--distortion-lo", sim.distortion_lo)->capture_default_str();
  simulate->add_option("--distortion-hi", sim.distortion_hi)->capture_default_str();
  simulate->add_option("--base-power", sim.base_power)->capture_default_str();
  simulate->add_option("--center", sim.center)->capture_default_str();
  simulate->add_option("--negative-floor", sim.negative_floor)->capture_default_str();
  simulate->add_option("--datasets", sim.n_datasets)->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--alpha", sim.alpha)->capture_default_str();
  simulate->add_option("--methods", method_names, "rma, fdn-mp, fdn-biweight")
      ->check(CLI::IsMember({"rma", "fdn-mp", "fdn-biweight"}))
      ->capture_default_str();
  add_output(simulate);

  // report
  auto* report = app.add_subcommand("report", "Render saved CSV results as tables");
  std::string study_csv, outliers_csv;
  auto* study_opt = report->add_option("--study", study_csv, "study.csv from simulate")
                        ->check(CLI::ExistingFile);
  report->add_option("--outliers", outliers_csv, "outliers.csv from outliers")
      ->check(CLI::ExistingFile)
      ->excludes(study_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  set_thread_count(threads);
  const fs::path dir(output_dir);

  try {
    if (normalize->parsed()) {
      const auto m = norm_in.load();
      NormalizeConfig cfg;
      cfg.prenorm = norm_in.anchor();
      cfg.reference = parse_reference_mode(reference);
      cfg.mode = parse_mapping_mode(mode);
      cfg.subset_intervals = quantiles;
      const auto res = normalize_pipeline(m, cfg);
      write_matrix(dir / "normalized.csv", res.normalized, TableFormat::csv);
      {
        auto f = open_output(dir / "reference.csv");
        f << "reference\n";
        for (const double v : res.reference.values()) f << format_double(v) << '\n';
      }
      if (res.borders) {
        auto f = open_output(dir / "depth.csv");
        write_depth_csv(f, m, *res.borders, *res.depth);
      }
      if (!boxplot_svg.empty()) {
        auto f = open_output(boxplot_svg);
        write_boxplot_svg(f, res.normalized, "log(x+1) after normalization");
      }
      out << "normalized " << m.rows() << " x " << m.cols() << " matrix; reference "
          << to_string(res.reference.source()) << '\n';
      return kExitOk;
    }

    if (depth->parsed()) {
      auto m = depth_in.prepared();
      if (!no_sort) m = column_sort(m);
      const auto fd = functional_depth(m);
      {
        auto f = open_output(dir / "depth.csv");
        write_depth_csv(f, m, fd.borders, fd.depth);
      }
      if (!curves_svg.empty()) {
        auto f = open_output(curves_svg);
        write_depth_curves_svg(f, no_sort ? column_sort(m) : m, fd.depth, "sorted samples by depth");
      }
      write_depth_csv(out, m, fd.borders, fd.depth);
      return kExitOk;
    }

    if (outliers->parsed()) {
      const auto m = out_in.prepared();
      const auto partition = read_partition(classes_path, inline_labels, m.cols());
      double g = 0.0;
      if (g_factor) {
        g = *g_factor;
      } else if (!calibration_path.empty()) {
        std::ifstream f(calibration_path);
        std::stringstream ss;
        ss << f.rdbuf();
        g = calibration_from_json(ss.str()).g_factor;
      } else {
        const auto cal = calibrate_g(m.cols(), m.rows(), robust_covariance(m), cal_settings);
        write_text(dir / "calibration.json", calibration_to_json(cal) + "\n");
        g = cal.g_factor;
      }
      const OutlierOptions options{both_members};
      auto reports = detect_outliers(m, g, OutlierScope::global, std::nullopt, options);
      if (partition) {
        auto per_class = detect_outliers(m, g, OutlierScope::per_class, partition, options);
        reports.insert(reports.end(), per_class.begin(), per_class.end());
      }
      {
        auto f = open_output(dir / "outliers.csv");
        write_outlier_csv(f, reports);
      }
      write_text(dir / "outliers.json", outliers_to_json(reports) + "\n");
      std::ostringstream table;
      write_outlier_table(table, reports);
      write_text(dir / "outliers.txt", table.str());
      out << table.str();
      return kExitOk;
    }

    if (calibrate->parsed()) {
      TukeyCalibration cal;
      if (!cal_input.empty()) {
        InputOptions in;
        in.path = cal_input;
        in.format = cal_format;
        in.no_header = cal_no_header;
        in.prenorm = cal_prenorm;
        const auto m = in.prepared();
        cal = calibrate_g(m.cols(), m.rows(), robust_covariance(m), cal_only);
      } else if (cal_samples > 0) {
        cal = calibrate_g(cal_samples, cal_features, Covariance::identity(cal_samples), cal_only);
      } else {
        throw UsageError("calibrate needs --input or --samples with --features");
      }
      write_text(dir / "calibration.json", calibration_to_json(cal) + "\n");
      out << "g_factor " << format_double(cal.g_factor) << '\n';
      return kExitOk;
    }

    if (simulate->parsed()) {
      std::vector<StudyMethod> methods;
      for (const auto& name : method_names) methods.push_back(parse_study_method(name));
      const auto result = run_study(sim, methods);
      {
        auto f = open_output(dir / "study.csv");
        write_study_csv(f, result);
      }
      {
        auto f = open_output(dir / "simulation.toml");
        write_simulation_config(f, sim);
      }
      std::ostringstream table;
      write_study_table(table, result);
      write_text(dir / "study.txt", table.str());
      out << table.str();
      return kExitOk;
    }

    if (report->parsed()) {
      if (!study_csv.empty()) {
        std::ifstream f(study_csv);
        write_study_table(out, read_study_csv(f));
      } else if (!outliers_csv.empty()) {
        std::ifstream f(outliers_csv);
        write_outlier_table(out, read_outlier_csv(f));
      } else {
        throw UsageError("report needs --study or --outliers");
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "depthnorm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "depthnorm: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace depthnorm::cli
