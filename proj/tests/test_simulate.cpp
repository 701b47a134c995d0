#include <doctest.h>

#include <cmath>
#include <sstream>

#include "depthnorm/error.hpp"
#include "depthnorm/simulate.hpp"
#include "depthnorm/stats.hpp"

using namespace depthnorm;

namespace {

SimulationConfig small_config() {
  SimulationConfig cfg;
  cfg.n_genes = 120;
  cfg.affected_genes = 20;
  cfg.n_datasets = 2;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  SimulationConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.n_samples = 7;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.affected_genes = cfg.n_genes + 1;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.distortion_lo = 3;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("shift lands on the affected genes of the first group only") {
  const auto cfg = small_config();
  const auto a = generate_undistorted(cfg, 10, 0.0, 4);
  const auto b = generate_undistorted(cfg, 10, 1.5, 4);
  const std::size_t shifted = cfg.affected_genes * cfg.probes_per_gene;
  for (std::size_t j = 0; j < cfg.n_samples; ++j) {
    for (std::size_t p = 0; p < a.values().rows(); ++p) {
      const double diff = b.values()(p, j) - a.values()(p, j);
      const double want = (p < shifted && j < cfg.n_samples / 2) ? 1.5 : 0.0;
      CHECK(diff == doctest::Approx(want).epsilon(1e-12));
    }
  }
  CHECK(a.values().class_labels()->front() == 1);
  CHECK(a.values().class_labels()->back() == 2);
}

TEST_CASE("probes are floored and the distortion is a power") {
  auto cfg = small_config();
  cfg.distortion_lo = cfg.distortion_hi = 0.0;
  const auto d = generate_dataset(cfg, 3, 0.0, 9);
  const auto u = generate_undistorted(cfg, 3, 0.0, 9);
  for (double e : d.exponents) CHECK(e == 3.0);
  for (std::size_t k = 0; k < u.values().values().size(); ++k) {
    CHECK(u.values().values()[k] >= cfg.negative_floor);
    CHECK(d.probes.values().values()[k] == std::pow(u.values().values()[k], 3.0));
  }
  const auto ranged = generate_dataset(small_config(), 3, 0.0, 9);
  for (double e : ranged.exponents) {
    CHECK(e >= 3.0);
    CHECK(e < 5.0);
  }
  CHECK(std::count(ranged.truth.begin(), ranged.truth.end(), true) == 20);
}

TEST_CASE("pre-distortion moments follow the t distribution") {
  SimulationConfig cfg;
  cfg.n_datasets = 1;
  const auto u = generate_undistorted(cfg, 10, 0.0, 1);
  const auto v = u.values().values();
  CHECK(v.size() == 11000u * 12u);
  CHECK(std::abs(stats::mean(v) - 3.0) < 0.02);
  CHECK(std::abs(stats::sample_variance(v) - 1.25) < 0.05);
}

TEST_CASE("generation is deterministic in the seeds") {
  const auto cfg = small_config();
  CHECK(generate_dataset(cfg, 10, 0.5, 3).probes.values() == generate_dataset(cfg, 10, 0.5, 3).probes.values());
  CHECK_FALSE(generate_dataset(cfg, 10, 0.5, 3).probes.values() ==
              generate_dataset(cfg, 10, 0.5, 4).probes.values());
}

TEST_CASE("study shape and a large shift") {
  auto cfg = small_config();
  cfg.deltas = {2.0};
  cfg.n_datasets = 1;
  const auto all = run_study(cfg, {StudyMethod::rma, StudyMethod::fdn_median_polish, StudyMethod::fdn_biweight});
  REQUIRE(all.rows.size() == 3);
  for (const auto& r : all.rows) CHECK(r.mean_power >= 95.0);
  CHECK(all.rows[0].method == StudyMethod::rma);
  CHECK(all.rows[2].method == StudyMethod::fdn_biweight);

  cfg.deltas = {0.0, 1.0};
  const auto rma = run_study(cfg, {StudyMethod::rma});
  REQUIRE(rma.rows.size() == 2);
  CHECK(rma.rows[0].delta == 0.0);
  CHECK(rma.rows[1].delta == 1.0);
}

TEST_CASE("study csv round trip") {
  auto cfg = small_config();
  cfg.deltas = {0.0, 0.5};
  const auto rep = run_study(cfg, {StudyMethod::rma, StudyMethod::fdn_biweight});
  std::ostringstream a;
  write_study_csv(a, rep);
  CHECK(a.str().rfind("df,delta,method,mean_power_percent,mean_false_discoveries,n_datasets\n", 0) == 0);
  std::istringstream in(a.str());
  const auto back = read_study_csv(in);
  std::ostringstream b;
  write_study_csv(b, back);
  CHECK(a.str() == b.str());
  std::ostringstream t;
  write_study_table(t, back);
  CHECK(t.str().find("FDN+biweight") != std::string::npos);
}

TEST_CASE("method names") {
  CHECK(parse_study_method("fdn-mp") == StudyMethod::fdn_median_polish);
  CHECK(to_string(StudyMethod::rma) == "RMA");
  CHECK_THROWS_AS(parse_study_method("gcrma"), UsageError);
}
