#pragma once

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

namespace fatoulab {

/// Number of workers used by the Monte-Carlo and rendering loops. Defaults to
/// the FATOULAB_THREADS environment variable if set, else the hardware count.
/// Changing it never changes results, only wall time.
int worker_count();
void set_worker_count(int n);

namespace detail {
void run_chunks(std::size_t chunks, void (*fn)(std::size_t, void*), void* ctx);
}

/// Calls body(i) for every i in [0, count). Bodies must write to disjoint
/// locations. The first exception thrown by any body is rethrown.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  using Fn = std::remove_reference_t<Body>;
  detail::run_chunks(
      count, [](std::size_t i, void* p) { (*static_cast<Fn*>(p))(i); },
      const_cast<void*>(static_cast<const void*>(&body)));
}

/// Splits [0, count) into one contiguous range per worker, accumulates each
/// range into its own Local, then merges the partials in range order.
/// Deterministic regardless of worker count whenever merge is associative and
/// commutative on the values produced (e.g. integer histogram counts).
template <class Local, class MakeLocal, class Body, class Merge>
Local parallel_reduce(std::size_t count, MakeLocal make_local, Body body,
                      Merge merge) {
  const std::size_t workers = static_cast<std::size_t>(worker_count());
  const std::size_t parts = count < workers ? (count == 0 ? 1 : count) : workers;
  std::vector<Local> partial;
  partial.reserve(parts);
  for (std::size_t p = 0; p < parts; ++p) partial.push_back(make_local());
  parallel_for(parts, [&](std::size_t p) {
    const std::size_t begin = count * p / parts;
    const std::size_t end = count * (p + 1) / parts;
    for (std::size_t i = begin; i < end; ++i) body(partial[p], i);
  });
  Local total = std::move(partial.front());
  for (std::size_t p = 1; p < parts; ++p) merge(total, partial[p]);
  return total;
}

}  // namespace fatoulab
