#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace trihyp {

/// Worker count: explicit jobs, else TRIHYP_JOBS, else hardware concurrency.
inline int job_count(int jobs) {
  if (jobs > 0) return jobs;
  if (const char* env = std::getenv("TRIHYP_JOBS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

/// Static-free parallel loop over [0, n); body must be thread safe.
inline void parallel_for(int n, const std::function<void(int)>& body, int jobs = 0) {
  int workers = std::min(job_count(jobs), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next(0);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace trihyp
