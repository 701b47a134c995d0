#pragma once

// Column-level arithmetic kernels.
//
// Every kernel has a portable scalar reference implementation. SIMD variants
// (AVX2+FMA on x86-64, NEON on aarch64) are compiled into separate translation
// units and selected once at runtime from the CPU's capabilities. Setting the
// environment variable DEPTHNORM_ISA=scalar forces the reference path.
//
// SIMD variants reassociate floating-point sums, so results agree with the
// scalar reference to rounding, not bitwise. `scale` is elementwise and agrees
// exactly.

#include <cstddef>
#include <span>
#include <vector>

namespace depthnorm::kernels {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;
  const char* name;
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  void (*scale)(double* x, std::size_t n, double factor);
};

const KernelTable& scalar_table() noexcept;

// Tables that are both compiled in and supported by the running CPU, scalar
// first.
std::vector<const KernelTable*> supported_tables();

// Table used by the library; resolved on first call.
const KernelTable& active() noexcept;

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

inline void scale(std::span<double> x, double factor) { active().scale(x.data(), x.size(), factor); }

namespace detail {
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;
}  // namespace detail

}  // namespace depthnorm::kernels
