#include <doctest.h>

#include <cmath>
#include <random>

#include "depthnorm/kernels.hpp"

using namespace depthnorm;

TEST_CASE("scalar table comes first and the active table is supported") {
  const auto tables = kernels::supported_tables();
  REQUIRE_FALSE(tables.empty());
  CHECK(tables.front()->isa == kernels::Isa::scalar);
  bool found = false;
  for (const auto* t : tables) found = found || t == &kernels::active();
  CHECK(found);
}

TEST_CASE("simd kernels agree with the scalar reference") {
  const auto& ref = kernels::scalar_table();
  std::mt19937_64 rng(83);
  std::normal_distribution<double> normal(0.0, 10.0);
  for (const auto* t : kernels::supported_tables()) {
    CAPTURE(t->name);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 100u, 1001u}) {
      std::vector<double> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = normal(rng);
        b[i] = normal(rng);
      }
      const double d_ref = ref.squared_distance(a.data(), b.data(), n);
      const double d = t->squared_distance(a.data(), b.data(), n);
      CHECK(d == doctest::Approx(d_ref).epsilon(1e-13));
      CHECK(t->sum(a.data(), n) == doctest::Approx(ref.sum(a.data(), n)).epsilon(1e-12).scale(1.0));

      auto x = a, y = a;
      ref.scale(x.data(), n, 1.7);
      t->scale(y.data(), n, 1.7);
      CHECK(x == y);
    }
  }
}

TEST_CASE("integer inputs give bitwise equal results") {
  std::mt19937_64 rng(89);
  std::uniform_int_distribution<int> u(-1000, 1000);
  std::vector<double> a(257), b(257);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
  }
  const auto& ref = kernels::scalar_table();
  for (const auto* t : kernels::supported_tables()) {
    CHECK(t->squared_distance(a.data(), b.data(), a.size()) ==
          ref.squared_distance(a.data(), b.data(), a.size()));
    CHECK(t->sum(a.data(), a.size()) == ref.sum(a.data(), a.size()));
  }
}

TEST_CASE("span wrappers") {
  const std::vector<double> a{0, 0}, b{3, 4};
  CHECK(kernels::squared_distance(a, b) == 25.0);
  CHECK(kernels::sum(b) == 7.0);
  std::vector<double> c{1, 2, 3};
  kernels::scale(c, 2.0);
  CHECK(c == std::vector<double>{2, 4, 6});
}
