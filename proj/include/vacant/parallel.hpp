#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace vacant {

/// Run fn(trial) for every trial in [0, trials) across `width` workers
/// (width <= 0 picks the hardware concurrency). Callers keep determinism by
/// writing into per-trial slots or summing integer statistics; the schedule
/// itself carries no information.
inline void parallel_trials(std::int64_t trials, int width,
                            const std::function<void(std::int64_t)>& fn) {
  if (width <= 0) width = static_cast<int>(std::thread::hardware_concurrency());
  if (width < 1) width = 1;
  if (width == 1 || trials <= 1) {
    for (std::int64_t i = 0; i < trials; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(width));
  for (int w = 0; w < width; ++w) {
    workers.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= trials) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace vacant
