#ifndef COMMAVG_PARALLEL_HPP
#define COMMAVG_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace commavg {

/// Worker count from COMMAVG_WORKERS (default 1, clamped to [1, 256]).
inline std::size_t worker_count() {
  const char* env = std::getenv("COMMAVG_WORKERS");
  if (!env || !*env) return 1;
  try {
    long v = std::stol(env);
    return static_cast<std::size_t>(std::clamp(v, 1L, 256L));
  } catch (const std::exception&) {
    return 1;
  }
}

/**
 * Runs body(begin, end) over contiguous chunks of [0, count). Chunks write
 * disjoint outputs and each keeps its sequential summation order, so results
 * do not depend on the worker count.
 */
template <class Body> void parallel_for(std::size_t count, Body&& body, std::size_t workers = worker_count()) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& t : pool) t.join();
}

} // namespace commavg

#endif // COMMAVG_PARALLEL_HPP
