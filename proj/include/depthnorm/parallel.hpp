#pragma once

#include <cstddef>
#include <functional>

namespace depthnorm {

// Worker count used by parallel_for. Defaults to the hardware concurrency;
// 0 restores that default.
void set_thread_count(unsigned threads) noexcept;
unsigned thread_count() noexcept;

// Runs body(i) for every i in [0, count). Iterations must write disjoint
// state; results are then independent of scheduling. The first exception
// thrown by any iteration is rethrown after all workers have joined.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace depthnorm
