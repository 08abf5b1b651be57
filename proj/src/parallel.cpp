#include "dqfe/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace dqfe {

namespace {

std::atomic<std::size_t> g_threads{0};

std::size_t env_threads() {
  const char* value = std::getenv("DQFE_THREADS");
  if (value == nullptr || *value == '\0') return 0;
  try {
    const long parsed = std::stol(value);
    return parsed > 0 ? static_cast<std::size_t>(parsed) : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

std::size_t default_threads() {
  if (const std::size_t t = g_threads.load(); t > 0) return t;
  if (const std::size_t t = env_threads(); t > 0) return t;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void set_default_threads(std::size_t threads) { g_threads.store(threads); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads) {
  if (count == 0) return;
  if (threads == 0) threads = default_threads();
  if (threads > count) threads = count;
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace dqfe
