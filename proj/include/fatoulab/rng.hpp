#pragma once

#include <array>
#include <cstdint>

#include "fatoulab/core.hpp"

namespace fatoulab {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// A pure function of (counter, key): no state, so any stream element can be
/// computed independently of every other one.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

/// One random stream per (master seed, stream index). Every Monte-Carlo item
/// (a walk, a sample) owns its stream, so results do not depend on which
/// worker evaluates it or in which order.
class CounterStream {
 public:
  CounterStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform angle on [0, 2π).
  double angle() { return kTwoPi * uniform(); }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;  // number of unread 64-bit halves in buffer_
};

}  // namespace fatoulab
