#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fractime {

/// Worker count after applying the FRACTIME_THREADS cap (if set) and
/// clamping to at least one.
unsigned effective_workers(unsigned requested);

/// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
/// visited exactly once; if any call throws, the exception raised by the
/// lowest failing index is rethrown after all workers have joined, so the
/// reported failure does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  workers = effective_workers(workers);
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const auto count = static_cast<std::size_t>(workers) < n ? workers : static_cast<unsigned>(n);
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace fractime
