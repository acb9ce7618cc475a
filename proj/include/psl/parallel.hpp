#pragma once

#include <cstddef>
#include <functional>

namespace psl {

/// Number of worker threads used by data-parallel loops (default 1).
/// Results never depend on this value: work is split into disjoint index
/// ranges and every reduction is performed serially afterwards.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs body(lo, hi) over a static partition of [begin, end). Calls made
/// from inside a worker run serially on that worker.
void parallel_for_ranges(std::size_t begin, std::size_t end,
                         const std::function<void(std::size_t, std::size_t)>& body);

/// Sum with pairwise (cascade) reduction; order depends only on the input.
double pairwise_sum(const double* data, std::size_t count);

}  // namespace psl
