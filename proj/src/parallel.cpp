#include "fatoulab/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

namespace fatoulab {

namespace {

int initial_worker_count() {
  if (const char* env = std::getenv("FATOULAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& workers() {
  static std::atomic<int> n{initial_worker_count()};
  return n;
}

}  // namespace

int worker_count() { return workers().load(); }

void set_worker_count(int n) { workers().store(n < 1 ? 1 : n); }

namespace detail {

void run_chunks(std::size_t chunks, void (*fn)(std::size_t, void*), void* ctx) {
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const long long n = static_cast<long long>(chunks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count())
  for (long long i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i), ctx);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

}  // namespace fatoulab
