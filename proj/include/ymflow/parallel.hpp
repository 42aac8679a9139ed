#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace ymflow {

/// Number of workers used by per-site loops. Reductions never depend on it.
int worker_count();
void set_worker_count(int workers);

/// Reads YMFLOW_THREADS, if set, into the worker count.
void apply_thread_env();

/// Splits [begin, end) into contiguous chunks, one per worker, and calls
/// body(chunk_begin, chunk_end) on each.
template <class Body>
void parallel_for(std::size_t begin, std::size_t end, Body&& body) {
  const std::size_t total = end > begin ? end - begin : 0;
  const auto workers = static_cast<std::size_t>(worker_count());
  if (workers <= 1 || total < 2 * workers) {
    body(begin, end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (total + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = begin + w * chunk;
    const std::size_t e = std::min(end, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  body(begin, std::min(end, begin + chunk));
  for (auto& t : pool) t.join();
}

/// Pairwise (tree) summation; the association order depends only on the
/// length of the input.
double pairwise_sum(std::span<const double> values);

}  // namespace ymflow
