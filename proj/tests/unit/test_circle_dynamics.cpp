#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "fatoulab/circle_dynamics.hpp"
#include "fatoulab/errors.hpp"
#include "fatoulab/parallel.hpp"

using namespace fatoulab;
using namespace fatoulab::circle;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

// z ↦ (z + t)/(1 + t z): fixed points ±1, attracting at 1 for t > 0
CircleMap hyperbolic(double t) { return CircleMap::mobius({1.0, t, t, 1.0}); }

double upper_half(double theta) { return theta > 0.0 && theta < kPi ? 1.0 : 0.0; }

}  // namespace

TEST_CASE("map construction") {
  CHECK(kind_of([] { CircleMap::power(0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { CircleMap::mobius({2.0, 0.0, 0.0, 1.0}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { CircleMap::mobius({0.0, 1.0, 1.0, 0.0}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { CircleMap::finite_blaschke({Complex{1.5, 0.0}}); }) == ErrorKind::InvalidArgument);
  CHECK(CircleMap::rotation(1.0).derivative_at_zero_modulus() == 1.0);
  CHECK(CircleMap::power(3).derivative_at_zero_modulus() == 0.0);
  CHECK(CircleMap::single_zero_factor(0.3).derivative_at_zero_modulus() == doctest::Approx(0.3));
  CHECK_FALSE(hyperbolic(0.5).fixes_origin());
  CHECK(kind_of([] { hyperbolic(0.5).derivative_at_zero_modulus(); }) == ErrorKind::OriginNotFixed);
  CHECK(CircleMap::power(2).to_json().at("kind") == "power");
}

TEST_CASE("iterate examples") {
  const auto r = iterate(CircleMap::rotation(0.3), 0.0, 3);
  CHECK(r[0] == doctest::Approx(0.3));
  CHECK(r[1] == doctest::Approx(0.6));
  CHECK(r[2] == doctest::Approx(0.9));

  const auto p = iterate(CircleMap::power(2), kTwoPi / 3.0, 6);
  for (std::size_t k = 0; k < p.size(); ++k) {
    CHECK(p[k] == doctest::Approx(k % 2 == 0 ? 4.0 * kPi / 3.0 : 2.0 * kPi / 3.0).epsilon(1e-12));
  }

  const auto h = iterate(hyperbolic(0.5), kPi / 2.0, 60);
  double prev = kPi / 2.0;
  for (double t : h) {
    CHECK(t < prev);
    CHECK(t >= 0.0);
    prev = t;
  }
  CHECK(h.back() < 1e-20);
}

TEST_CASE("doubling is exact in angle arithmetic") {
  const double theta0 = 0.123456789;
  const auto orbit = iterate(CircleMap::power(2), theta0, 40);
  for (std::size_t n = 1; n <= orbit.size(); ++n) {
    CHECK(orbit[n - 1] == wrap_angle(std::ldexp(theta0, static_cast<int>(n))));
  }
}

TEST_CASE("composition of origin-fixing maps") {
  const std::vector<CircleMap> seq = {CircleMap::rotation(1.0), CircleMap::power(2), CircleMap::rotation(-0.5)};
  const auto g = compose_sequence(seq, 0.25);
  CHECK(g[0] == doctest::Approx(1.25));
  CHECK(g[1] == doctest::Approx(2.5));
  CHECK(g[2] == doctest::Approx(2.0));
  const std::vector<CircleMap> bad = {CircleMap::rotation(1.0), hyperbolic(0.2)};
  CHECK(kind_of([&] { compose_sequence(bad, 0.0); }) == ErrorKind::OriginNotFixed);
  CHECK(kind_of([&] { pommerenke_sum(bad); }) == ErrorKind::OriginNotFixed);
}

TEST_CASE("discrepancy") {
  CHECK(discrepancy(std::vector<double>{0.0}) == 1.0);
  for (std::size_t n : {4u, 10u, 1000u}) {
    std::vector<double> eq;
    for (std::size_t k = 0; k < n; ++k) eq.push_back(kTwoPi * k / n);
    CHECK(discrepancy(eq) == doctest::Approx(1.0 / n).epsilon(1e-9));
  }
  CHECK(kind_of([] { discrepancy(std::vector<double>{}); }) == ErrorKind::EmptyInput);

  const auto golden = CircleMap::rotation(kTwoPi * std::numbers::phi);
  const auto orbit = iterate(golden, 0.0, 100000);
  const std::span<const double> all(orbit);
  const double d4 = discrepancy(all.first(10000));
  CHECK(d4 < 10.0 * std::log(1e4) / 1e4);
  CHECK(discrepancy(all) < 0.5 * discrepancy(all.first(1000)));
}

TEST_CASE("power typical orbit is the base-d shift") {
  const auto o = power_typical_orbit(2, 2000, 3);
  for (std::size_t k = 0; k + 1 < o.size(); ++k) {
    CHECK(std::abs(wrap_angle(2.0 * o[k]) - o[k + 1]) < 1e-12);
  }
  CHECK(discrepancy(o) < 0.05);
  CHECK(power_typical_orbit(2, 10, 3) == std::vector<double>(o.begin(), o.begin() + 10));
}

TEST_CASE("Birkhoff averages separate the two behaviours") {
  const std::size_t n = 10000;
  // upper and lower semicircles are invariant under the hyperbolic map
  const auto m = hyperbolic(0.01);
  const double upper = birkhoff_average(iterate(m, kPi / 2.0, n), upper_half);
  const double lower = birkhoff_average(iterate(m, 3.0 * kPi / 2.0, n), upper_half);
  CHECK(std::abs(upper - lower) > 0.5);

  const double a = birkhoff_average(power_typical_orbit(2, n, 1), upper_half);
  const double b = birkhoff_average(power_typical_orbit(2, n, 2), upper_half);
  CHECK(std::abs(a - b) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(kind_of([] { birkhoff_average(std::vector<double>{}, upper_half); }) == ErrorKind::EmptyInput);
}

TEST_CASE("arc spreading") {
  const Arc small{0.3, kTwoPi / 1024.0};
  const auto p = arc_spread(CircleMap::power(2), small, 50);
  REQUIRE(p.first_full_cover.has_value());
  CHECK(*p.first_full_cover == 10);
  CHECK(p.iterations == 10);
  for (std::size_t k = 1; k < p.covered_fraction.size(); ++k) {
    CHECK(p.covered_fraction[k] >= p.covered_fraction[k - 1]);
  }

  const Arc arc{1.0, 0.5};
  const auto r = arc_spread(CircleMap::rotation(std::sqrt(2.0)), arc, 1000);
  CHECK_FALSE(r.first_full_cover.has_value());
  CHECK(r.iterations == 1000);
  for (double f : r.covered_fraction) CHECK(std::abs(f - 0.5 / kTwoPi) < 3.0 / kReferenceCells);

  const auto h = arc_spread(hyperbolic(0.5), arc, 1000);
  CHECK_FALSE(h.first_full_cover.has_value());
  CHECK(h.covered_fraction.back() < h.initial_fraction);
  CHECK(h.covered_fraction.back() <= 2.0 / kReferenceCells);

  CHECK(kind_of([&] { arc_spread(CircleMap::power(2), {0.0, 0.0}, 5); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { arc_spread(CircleMap::power(2), arc, 5, 100); }) == ErrorKind::InvalidArgument);
  const auto j = p.to_json();
  CHECK(j.at("first_full_cover") == 10);
}

TEST_CASE("Pommerenke dichotomy") {
  const std::size_t n = 1000;
  std::vector<CircleMap> divergent, summable, rotations;
  for (std::size_t k = 1; k <= n; ++k) {
    divergent.push_back(CircleMap::single_zero_factor(0.5));
    summable.push_back(CircleMap::single_zero_factor(1.0 - 1.0 / static_cast<double>((k + 1) * (k + 1))));
    rotations.push_back(CircleMap::rotation(0.1));
  }
  CHECK(pommerenke_sum(rotations) == 0.0);
  CHECK(pommerenke_sum(divergent) == doctest::Approx(500.0));
  CHECK(pommerenke_sum(summable) < std::numbers::pi * std::numbers::pi / 6.0);

  // the zeros accumulate at 1, where the early factors still expand strongly;
  // an arc within about one radian of 1 gets swept there and covers
  const Arc arc{2.0, 0.05};
  CHECK(arc_spread_sequence(divergent, arc).first_full_cover.has_value());
  CHECK_FALSE(arc_spread_sequence(summable, arc).first_full_cover.has_value());
  CHECK_FALSE(arc_spread_sequence(rotations, arc).first_full_cover.has_value());

  std::vector<CircleMap> doubling(20, CircleMap::power(2));
  CHECK(pommerenke_sum(doubling) == 20.0);
  CHECK(arc_spread_sequence(doubling, arc).first_full_cover.has_value());
}

TEST_CASE("Lebesgue invariance") {
  const std::size_t n = 10000;
  for (const auto& m : {CircleMap::rotation(1.0), CircleMap::power(3), CircleMap::single_zero_factor({0.3, 0.4})}) {
    const auto rep = invariance_test(m, n, 8);
    INFO(m.kind_name(), " ks = ", rep.ks);
    CHECK(rep.pass);
    CHECK(rep.ks < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(rep.redraws == 0);
  }
  auto product = std::make_shared<const baker::BlaschkeProduct>(baker::solve_tau(0.4));
  const auto rep = invariance_test(CircleMap::blaschke(product), n, 8);
  CHECK(rep.pass);
  CHECK(rep.critical_1pct == doctest::Approx(1.63 / 100.0));
  CHECK(kind_of([] { invariance_test(CircleMap::power(2), 0, 1); }) == ErrorKind::EmptyInput);
}

TEST_CASE("Blaschke boundary map near its singularities") {
  auto product = std::make_shared<const baker::BlaschkeProduct>(baker::solve_tau(0.25));
  const auto g = CircleMap::blaschke(product);
  CHECK(kind_of([&] { g.apply(1e-5); }) == ErrorKind::SingularityApproach);
  CHECK(g.apply(kPi / 2.0) == doctest::Approx(kPi / 2.0));
  CHECK(g.derivative_at_zero_modulus() == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("statistics are worker independent") {
  const auto g = CircleMap::power(3);
  set_worker_count(1);
  const auto a = invariance_test(g, 5000, 4);
  const auto sa = arc_spread(g, {0.2, 0.01}, 20);
  set_worker_count(4);
  const auto b = invariance_test(g, 5000, 4);
  const auto sb = arc_spread(g, {0.2, 0.01}, 20);
  CHECK(a.ks == b.ks);
  CHECK(sa.covered_fraction == sb.covered_fraction);
}

TEST_CASE("orbit csv") {
  const std::vector<double> o = {0.5, 1.0};
  CHECK(orbit_csv(o) == "iteration,angle_rad\n0,0.5\n1,1\n");
}
