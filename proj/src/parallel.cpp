// Licensed under the Apache License 2.0 (see LICENSE file).

#include "definetti/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace definetti {

namespace {

std::atomic<std::size_t>& configured_workers() {
  static std::atomic<std::size_t> workers{std::max<std::size_t>(1, std::thread::hardware_concurrency())};
  return workers;
}

// Nested parallel_for calls run inline on the calling worker.
thread_local bool inside_worker = false;

}  // namespace

std::size_t worker_count() { return configured_workers().load(); }

void set_worker_count(std::size_t workers) { configured_workers().store(std::max<std::size_t>(1, workers)); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1 || inside_worker) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    const bool outer = inside_worker;
    inside_worker = true;
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    inside_worker = outer;
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace definetti
