#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gpvw {

/// Number of worker threads used by grid loops (>= 1).
int num_threads();

/// Sets the worker count. 1 runs every loop inline on the calling thread.
void set_num_threads(int n);

/// Reads GPVW_THREADS from the environment; returns `fallback` when unset or invalid.
int threads_from_env(int fallback = 1);

/// Runs body(begin, end) over contiguous chunks of [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Deterministic sum over rows: row_sum(j) is evaluated for every j in [0, rows)
/// (possibly concurrently) and the partial sums are added in row order, so the
/// result does not depend on the thread count.
double row_reduce(std::size_t rows, const std::function<double(std::size_t)>& row_sum);

/// Deterministic max over rows.
double row_max(std::size_t rows, const std::function<double(std::size_t)>& row_value);

}  // namespace gpvw
