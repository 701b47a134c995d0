#include <doctest.h>

#include <algorithm>

#include "depthnorm/error.hpp"
#include "depthnorm/normalize.hpp"
#include "depthnorm/stats.hpp"
#include "depthnorm/transforms.hpp"
#include "support.hpp"

using namespace depthnorm;

namespace {

std::vector<double> col(const ExpressionMatrix& m, std::size_t j) {
  const auto c = m.column(j);
  return {c.begin(), c.end()};
}

ReferenceCurve ref(std::vector<double> v) {
  return ReferenceCurve(std::move(v), ReferenceSource::component_median);
}

ReferenceCurve sorted_reference(std::mt19937_64& rng, std::size_t rows) {
  auto r = testing::random_tie_free(rng, rows, 1);
  auto v = col(r, 0);
  std::sort(v.begin(), v.end());
  return ref(v);
}

}  // namespace

TEST_CASE("reference curve validation") {
  CHECK_THROWS_AS(ref({}), DomainError);
  CHECK_THROWS_AS(ref({2, 1}), DomainError);
  CHECK_NOTHROW(ref({1, 1, 2}));
}

TEST_CASE("full quantile normalization") {
  const auto r = ref({10, 20, 30});
  CHECK(col(quantile_normalize_full(ExpressionMatrix(3, 1, {3, 1, 2}), r), 0) ==
        std::vector<double>{30, 10, 20});
  CHECK(col(quantile_normalize_full(ExpressionMatrix(3, 1, {5, 5, 1}), r), 0) ==
        std::vector<double>{25, 25, 10});
  const ExpressionMatrix m(4, 1, {7, 2, 9, 4});
  CHECK(quantile_normalize_full(m, ref({2, 4, 7, 9})) == m);
  CHECK_THROWS_AS(quantile_normalize_full(m, r), DimensionError);
}

TEST_CASE("full normalization properties on tie-free data") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 30; ++t) {
    const std::size_t rows = 3 + t, cols = 2 + t % 5;
    const auto m = testing::random_tie_free(rng, rows, cols);
    const auto r = sorted_reference(rng, rows);
    const auto q = quantile_normalize_full(m, r);
    for (std::size_t j = 0; j < cols; ++j) {
      auto s = col(q, j);
      CHECK(stats::average_ranks(s) == stats::average_ranks(m.column(j)));
      std::sort(s.begin(), s.end());
      CHECK(s == testing::vec(r.values()));
    }
    CHECK(quantile_normalize_full(q, r) == q);
  }
}

TEST_CASE("subset quantile normalization") {
  const ExpressionMatrix m(5, 1, {0, 5, 10, 15, 20});
  const auto r = ref({0, 50, 100, 150, 200});
  const QuantileGrid grid({0.0, 0.5, 1.0});
  const auto q = quantile_normalize_subset(m, r, grid);
  CHECK(q(1, 0) == 50.0);
  CHECK(q(2, 0) == 100.0);
  CHECK(q(3, 0) == 150.0);
  CHECK(q(0, 0) == 0.0);
  CHECK(q(4, 0) == 200.0);
}

TEST_CASE("subset with every level agrees with full mapping") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 25; ++t) {
    const auto m = testing::random_tie_free(rng, 20, 4);
    const auto r = sorted_reference(rng, 20);
    CHECK(quantile_normalize_subset(m, r, QuantileGrid::uniform(19)) == quantile_normalize_full(m, r));
  }
}

TEST_CASE("subset mapping is monotone and handles flat knots") {
  const ExpressionMatrix m(6, 1, {1, 1, 1, 1, 2, 3});
  const auto q = quantile_normalize_subset(m, ref({0, 10, 20, 30, 40, 50}), QuantileGrid::uniform(5));
  CHECK(q(0, 0) == q(3, 0));
  CHECK(q(0, 0) == 15.0);
  CHECK(q(4, 0) == 40.0);
  CHECK(q(5, 0) == 50.0);
}

TEST_CASE("quantile grid validation") {
  CHECK_THROWS_AS(QuantileGrid({0.0, 0.5}), DomainError);
  CHECK_THROWS_AS(QuantileGrid({0.0, 0.5, 0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(QuantileGrid::uniform(0), DomainError);
  CHECK(QuantileGrid::uniform(4).levels() == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
}

TEST_CASE("pipeline on identical columns is the identity") {
  const ExpressionMatrix m(4, 3, {5, 1, 3, 8, 5, 1, 3, 8, 5, 1, 3, 8});
  for (auto rm : {ReferenceMode::deepest, ReferenceMode::component_median}) {
    for (auto mm : {MappingMode::full, MappingMode::subset}) {
      NormalizeConfig cfg;
      cfg.reference = rm;
      cfg.mode = mm;
      cfg.subset_intervals = 3;
      CHECK(normalize_pipeline(m, cfg).normalized == m);
    }
  }
}

TEST_CASE("pipeline reference choices") {
  NormalizeConfig cfg;
  cfg.prenorm.reset();
  const auto toy = normalize_pipeline(testing::scalar_sample({0, 1, 10}), cfg);
  CHECK(testing::vec(toy.reference.values()) == std::vector<double>{1});
  REQUIRE(toy.depth);
  CHECK(toy.depth->deepest == std::vector<std::size_t>{1});

  cfg.reference = ReferenceMode::component_median;
  const auto med = normalize_pipeline(ExpressionMatrix(3, 2, {1, 2, 3, 10, 20, 30}), cfg);
  CHECK(col(med.normalized, 0) == std::vector<double>{5.5, 11, 16.5});
  CHECK(col(med.normalized, 1) == std::vector<double>{5.5, 11, 16.5});
  CHECK_FALSE(med.borders);
}

TEST_CASE("pipeline keeps row order and equalizes distributions") {
  std::mt19937_64 rng(47);
  const auto m = testing::random_tie_free(rng, 30, 6);
  const auto res = normalize_pipeline(m);
  const auto ref_values = testing::vec(res.reference.values());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    CHECK(stats::average_ranks(res.normalized.column(j)) == stats::average_ranks(m.column(j)));
    auto s = col(res.normalized, j);
    std::sort(s.begin(), s.end());
    CHECK(s == ref_values);
  }
  CHECK(res.normalized.sample_ids() == m.sample_ids());
}

TEST_CASE("mode names") {
  CHECK(parse_reference_mode("median") == ReferenceMode::component_median);
  CHECK(parse_reference_mode("deepest") == ReferenceMode::deepest);
  CHECK(parse_mapping_mode("subset") == MappingMode::subset);
  CHECK_THROWS_AS(parse_mapping_mode("partial"), UsageError);
}
