#include <cstdlib>
#include <string_view>

#include "depthnorm/kernels.hpp"

namespace depthnorm::kernels {

namespace detail {
#ifndef DEPTHNORM_HAVE_AVX2
const KernelTable* avx2_table() noexcept { return nullptr; }
#endif
#ifndef DEPTHNORM_HAVE_NEON
const KernelTable* neon_table() noexcept { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() noexcept {
#if defined(DEPTHNORM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& resolve() noexcept {
  if (const char* forced = std::getenv("DEPTHNORM_ISA");
      forced != nullptr && std::string_view(forced) == "scalar") {
    return scalar_table();
  }
  const auto tables = supported_tables();
  return *tables.back();
}

}  // namespace

std::vector<const KernelTable*> supported_tables() {
  std::vector<const KernelTable*> out{&scalar_table()};
  if (const auto* t = detail::avx2_table(); t != nullptr && cpu_has_avx2()) out.push_back(t);
  // Advanced SIMD is mandatory on aarch64.
  if (const auto* t = detail::neon_table(); t != nullptr) out.push_back(t);
  return out;
}

const KernelTable& active() noexcept {
  static const KernelTable& table = resolve();
  return table;
}

}  // namespace depthnorm::kernels
