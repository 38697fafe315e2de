#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "fatoulab/arc_histogram.hpp"
#include "fatoulab/core.hpp"
#include "fatoulab/errors.hpp"
#include "fatoulab/parallel.hpp"
#include "fatoulab/rng.hpp"
#include "fatoulab/stats.hpp"

using namespace fatoulab;

// Known-answer vectors of the Random123 reference implementation.
TEST_CASE("philox4x32-10 known answers") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) ==
        C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::block(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          K{0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::block(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          K{0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter streams are reproducible and distinct") {
  CounterStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 16; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs_c |= x != c.next_u64();
    differs_d |= x != d.next_u64();
  }
  CHECK(differs_c);
  CHECK(differs_d);
}

TEST_CASE("uniform draws lie in [0, 1) with mean near 1/2") {
  CounterStream s(1, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("parallel_reduce result does not depend on worker count") {
  const auto run = [] {
    return parallel_reduce<std::vector<std::uint64_t>>(
        10007, [] { return std::vector<std::uint64_t>(17, 0); },
        [](std::vector<std::uint64_t>& h, std::size_t i) {
          CounterStream s(9, i);
          ++h[s.next_u64() % 17];
        },
        [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
          for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
        });
  };
  const int saved = worker_count();
  set_worker_count(1);
  const auto one = run();
  set_worker_count(5);
  const auto five = run();
  set_worker_count(saved);
  CHECK(one == five);
}

TEST_CASE("parallel_for rethrows a body exception") {
  CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) {
                    if (i == 37) throw Error(ErrorKind::Internal, "boom");
                  }),
                  Error);
}

TEST_CASE("wrap_angle reduces into [0, 2pi)") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(-1e-300) < kTwoPi);
  CHECK(wrap_angle(-1.0) == doctest::Approx(kTwoPi - 1.0));
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - kTwoPi));
}

TEST_CASE("arc histogram binning and csv") {
  ArcHistogram h(1, 4);
  h.add_angle(0.0);
  h.add_angle(kPi / 2 - 1e-12);
  h.add_angle(kPi / 2);
  h.add_angle(kTwoPi - 1e-15);
  CHECK(h.counts == std::vector<std::uint64_t>{2, 1, 0, 1});
  CHECK(h.total() == 4);
  std::vector<ArcHistogram> hs{h};
  const std::string csv = histogram_csv(hs);
  CHECK(csv.rfind("component_id,bin_index,bin_start_angle_rad,count\n", 0) == 0);
  CHECK(csv.find("1,1,1.5707963267948966,1\n") != std::string::npos);
}

TEST_CASE("total variation") {
  const std::vector<double> p{0.5, 0.5, 0.0}, q{0.25, 0.25, 0.5};
  CHECK(total_variation(p, q) == doctest::Approx(0.5));
  CHECK(total_variation(p, p) == 0.0);
}

TEST_CASE("ks statistic against hand-computed values") {
  // sorted {0.1, 0.5, 0.9}: D+ = max(1/3 − 0.1, 2/3 − 0.5, 1 − 0.9), D− = max(0.1, 0.5 − 1/3, 0.9 − 2/3)
  CHECK(stats::ks_uniform({0.9, 0.1, 0.5}) == doctest::Approx(0.2333333333333333));
  CHECK(stats::ks_critical_1pct(100000) == doctest::Approx(1.63 / std::sqrt(1e5)));
}

TEST_CASE("chi-square critical value matches tables") {
  // upper 0.1% points: 63 dof → 103.44, 127 dof → 181.99
  CHECK(stats::chi_square_critical_001(63) == doctest::Approx(103.44).epsilon(0.005));
  CHECK(stats::chi_square_critical_001(127) == doctest::Approx(181.99).epsilon(0.005));
}
