// Runs the twelve acceptance criteria and prints one PASS/FAIL line each.
//
//   acceptance [--strict] [--only N[,N...]] [--image PATH]
//
// Exit status is 0 once every criterion has run to a verdict; --strict makes
// any FAIL exit 1. A criterion that throws is reported as FAIL with the error.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <memory>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "fatoulab/blaschke_baker.hpp"
#include "fatoulab/circle_dynamics.hpp"
#include "fatoulab/covering_models.hpp"
#include "fatoulab/errors.hpp"
#include "fatoulab/harmonic_measure.hpp"
#include "fatoulab/map_zoo.hpp"
#include "fatoulab/renderer.hpp"
#include "fatoulab/rng.hpp"
#include "fatoulab/stats.hpp"

using namespace fatoulab;

namespace {

constexpr double E = std::numbers::e;
constexpr double kAlphas[] = {0.1, 0.25, 0.4};

struct Verdict {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 = none
  std::function<Verdict()> run;
};

std::string image_path = "baker_alpha_0.4.ppm";

Verdict c1_multipliers() {
  bool ok = true;
  std::string d;
  for (double a : kAlphas) {
    const auto m = baker::multiplier_check(a);
    const double gf = std::abs(m.f_prime_at_1 - 2 * a);
    const double gs = std::abs(m.sine_prime_at_0 - 2 * a);
    const double gb = std::abs(m.blaschke_prime_at_0 - 2 * a);
    ok = ok && gf < 1e-14 && gs < 1e-14 && gb < 1e-10 && m.tau.residual < 1e-12;
    d += fmt::format("a={}: |f'-2a|={:.1e} |F'-2a|={:.1e} |B'-2a|={:.1e} res={:.1e}; ", a, gf, gs, gb,
                     m.tau.residual);
  }
  return {ok, d};
}

Verdict c2_semiconjugacy() {
  bool ok = true;
  std::string d;
  for (double a : kAlphas) {
    const auto r = baker::verify_semiconjugacy(a, 1000, 2024, 3.0);
    ok = ok && r.max_residual < 1e-12;
    d += fmt::format("a={}: max={:.2e} (rel {:.1e}); ", a, r.max_residual, r.max_relative_residual);
  }
  return {ok, d};
}

Verdict c3_boundary_modulus() {
  bool ok = true;
  std::string d;
  const double target = 1e-10;
  for (double a : kAlphas) {
    const baker::BlaschkeProduct b(baker::solve_tau(a), baker::BlaschkeProduct::kDefaultCap, 0.05);
    double worst = 0.0;
    int taken = 0;
    for (std::uint64_t i = 0; taken < 1000; ++i) {
      CounterStream rng(3, i);
      const double theta = rng.angle();
      const Complex z = std::polar(1.0, theta);
      if (std::min(std::abs(z - 1.0), std::abs(z + 1.0)) <= 0.05) continue;
      worst = std::max(worst, std::abs(std::abs(b.eval(z, target).value) - 1.0));
      ++taken;
    }
    // N along θ_k = 2^{−k} toward the singularity at 1
    const baker::BlaschkeProduct near(baker::solve_tau(a), baker::BlaschkeProduct::kDefaultCap, 1e-9);
    std::vector<std::size_t> n;
    for (int k = 0; k <= 20; ++k) n.push_back(near.required_terms(std::polar(1.0, std::ldexp(1.0, -k)), target));
    const bool monotone = std::is_sorted(n.begin(), n.end()) && n.back() > n.front();
    ok = ok && worst < 1e-8 && monotone;
    d += fmt::format("a={}: max||B|-1|={:.1e}, N(2^-k) {}..{} {}; ", a, worst, n.front(), n.back(),
                     monotone ? "non-decreasing" : "NOT monotone");
  }
  return {ok, d};
}

Verdict c4_invariance() {
  auto product = std::make_shared<const baker::BlaschkeProduct>(baker::solve_tau(0.4),
                                                                baker::BlaschkeProduct::kDefaultCap, 1e-9);
  const auto r = circle::invariance_test(circle::CircleMap::blaschke(product, 1e-10), 100000, 4);
  return {r.ks < r.critical_1pct,
          fmt::format("KS={:.5f} critical={:.5f} n={} redraws={}", r.ks, r.critical_1pct, r.n_samples, r.redraws)};
}

Verdict c5_closed_form() {
  bool ok = true;
  std::string d;
  const std::uint64_t n = 1000000;
  std::uint64_t seed = 500;
  for (double R : {2.0, E, 10.0}) {
    const auto dom = harmonic::DomainOracle::annulus(1.0 / R, R);
    for (double rho : {1.0 / std::sqrt(R), 1.0, std::sqrt(R)}) {
      const auto w = harmonic::walk_on_spheres(dom, rho, n, ++seed);
      const double p = std::log(rho * R) / std::log(R * R);
      const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
      const double z = std::abs(w.component_masses()[1] - p) / sigma;
      ok = ok && z < 4.0;
      d += fmt::format("({:.3g},{:.3g}) {:.2f}s; ", rho, R, z);
    }
  }
  return {ok, "deviation in standard errors " + d};
}

Verdict c6_support() {
  const std::uint64_t n = 1000000;
  harmonic::WalkConfig cfg;
  cfg.n_bins = 64;
  const auto annulus = harmonic::walk_on_spheres(harmonic::DomainOracle::annulus(1.0 / E, E), 1.0, n, 61, cfg);
  std::vector<harmonic::Bubble> bubbles;
  for (int k = 0; k < 5; ++k) bubbles.push_back({std::polar(0.5, kTwoPi * k / 5.0), 0.1});
  const auto champagne = harmonic::walk_on_spheres(harmonic::DomainOracle::champagne(bubbles), 0.0, n, 62, cfg);
  const auto sa = harmonic::support_test(annulus, 1e-4);
  const auto sc = harmonic::support_test(champagne, 1e-4);
  return {sa.pass && sc.pass,
          fmt::format("annulus min bin {:.2e} ({} deficient), champagne min bin {:.2e} ({} deficient of {})",
                      sa.smallest_observed, sa.deficient.size(), sc.smallest_observed, sc.deficient.size(),
                      6 * 64)};
}

Verdict c7_cross_validation() {
  const auto x = harmonic::cross_validate(harmonic::DomainOracle::annulus(1.0 / E, E),
                                          cover::CoveringModel::annulus(E), 1000000, 70, 32);
  return {x.tv_distance < 0.01,
          fmt::format("TV={:.5f} (C/sqrt(n)={:.3f}) wos_seed={} pushforward_seed={}", x.tv_distance, x.threshold,
                      x.wos_seed, x.pushforward_seed)};
}

Verdict c8_radial() {
  const auto a = cover::CoveringModel::annulus(E);
  const bool bounded = cover::radial_classify(a, 1.0).verdict == cover::RadialVerdict::Bounded &&
                       cover::radial_classify(a, -1.0).verdict == cover::RadialVerdict::Bounded;
  int escaping = 0, tested = 0, bungee = 0;
  for (int j = 0; j < 64; ++j) {
    const Complex xi = std::polar(1.0, kTwoPi * j / 64.0);
    if (std::abs(xi - 1.0) < 0.05 || std::abs(xi + 1.0) < 0.05) continue;
    ++tested;
    const auto v = cover::radial_classify(a, xi).verdict;
    escaping += v == cover::RadialVerdict::Escaping;
    bungee += v == cover::RadialVerdict::Bungee;
  }
  return {bounded && escaping == tested && bungee == 0,
          fmt::format("+-1 bounded: {}, escaping {}/{}, bungee {}", bounded, escaping, tested, bungee)};
}

Verdict c9_lifts() {
  const auto a = cover::CoveringModel::annulus(E);
  const double theta = 1.0;
  const auto& m = std::get<zoo::Mobius>(cover::lift_map(a, a, zoo::MapSpec::rotation(theta)).kind());
  const auto cls = cover::classify_mobius(m);
  const auto dst = cover::CoveringModel::annulus(E * E);
  const auto& id = std::get<zoo::Mobius>(cover::lift_map(a, dst, zoo::MapSpec::power_map(2)).kind());
  double rot_worst = 0.0, pow_worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    CounterStream rng(9, i);
    // area-uniform on |z| ≤ 0.9, away from the conditioning blow-up at ±1
    const Complex z = std::polar(0.9 * std::sqrt(rng.uniform()), rng.angle());
    rot_worst = std::max(rot_worst, std::abs(cover::cover_eval(a, m.apply(z)) -
                                             std::polar(1.0, theta) * cover::cover_eval(a, z)));
    const Complex w = cover::cover_eval(a, z);
    pow_worst = std::max(pow_worst, std::abs(cover::cover_eval(dst, id.apply(z)) - w * w));
  }
  const bool ok = cls.type == cover::MobiusType::Hyperbolic && cls.boundary_fixed_points.size() == 2 &&
                  id.is_identity(0.0) && rot_worst < 1e-12 && pow_worst < 1e-12;
  return {ok, fmt::format("rotation lift hyperbolic with {} boundary fixed points, residual {:.1e}; "
                          "power chain lift identity: {}, residual {:.1e}",
                          cls.boundary_fixed_points.size(), rot_worst, id.is_identity(0.0), pow_worst)};
}

Verdict c10_spreading() {
  using circle::CircleMap;
  const auto p = circle::arc_spread(CircleMap::power(2), {0.3, kTwoPi / 1024.0}, 1000);
  const circle::Arc arc{2.0, 0.05};
  const auto r = circle::arc_spread(CircleMap::rotation(kTwoPi * std::numbers::phi), arc, 1000);
  const auto h = circle::arc_spread(CircleMap::mobius({1.0, 0.5, 0.5, 1.0}), arc, 1000);
  std::vector<CircleMap> divergent, summable;
  for (std::size_t k = 1; k <= 1000; ++k) {
    divergent.push_back(CircleMap::single_zero_factor(0.5));
    summable.push_back(CircleMap::single_zero_factor(1.0 - 1.0 / static_cast<double>((k + 1) * (k + 1))));
  }
  const auto dv = circle::arc_spread_sequence(divergent, arc);
  const auto sm = circle::arc_spread_sequence(summable, arc);
  const bool ok = p.first_full_cover == std::optional<std::size_t>(10) && !r.first_full_cover &&
                  !h.first_full_cover && dv.first_full_cover.has_value() && !sm.first_full_cover;
  const auto cover_str = [](const circle::SpreadReport& s) {
    return s.first_full_cover ? fmt::format("cover@{}", *s.first_full_cover)
                              : fmt::format("no cover, final {:.4f}", s.covered_fraction.back());
  };
  return {ok, fmt::format("power(2) {}; rotation {}; hyperbolic {}; divergent (sum {:.0f}) {}; summable (sum {:.3f}) {}",
                          cover_str(p), cover_str(r), cover_str(h), circle::pommerenke_sum(divergent),
                          cover_str(dv), circle::pommerenke_sum(summable), cover_str(sm))};
}

render::GridSpec figure_grid() {
  render::GridSpec g;
  g.center = 0.0;
  g.width = g.height = 8.0;
  g.nx = g.ny = 1000;
  g.max_iter = 500;
  return g;
}

std::unique_ptr<render::ClassifiedGrid> figure;

Verdict c11_figure() {
  const auto f = zoo::MapSpec::exp_baker(0.4);
  figure = std::make_unique<render::ClassifiedGrid>(render::classify_grid(f, figure_grid()));
  const auto again = render::classify_grid(f, figure_grid());
  const auto bytes = render::encode_ppm(*figure);
  const bool deterministic = bytes == render::encode_ppm(again);
  render::write_image(*figure, image_path);
  const auto cert = render::loop_probe(*figure, 0.0, 1.0);
  return {deterministic && cert.verdict,
          fmt::format("{} bytes, deterministic: {}, loop pixels {}, non-basin inside {} outside {} -> {}",
                      bytes.size(), deterministic, cert.loop_pixels, cert.inside_nonbasin, cert.outside_nonbasin,
                      cert.verdict ? "non-contractible" : "no certificate")};
}

Verdict c12_symmetry() {
  const auto f = zoo::MapSpec::exp_baker(0.4);
  if (!figure) figure = std::make_unique<render::ClassifiedGrid>(render::classify_grid(f, figure_grid()));
  const auto c = render::conjugation_symmetry(*figure);
  const auto s = render::inversion_symmetry(f, *figure);
  return {c.mismatched == 0 && s.mismatched == 0 && s.compared > 0,
          fmt::format("conjugation {}/{} mismatched, inversion {}/{} mismatched", c.mismatched, c.compared,
                      s.mismatched, s.compared)};
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::string list = argv[++i];
      std::size_t pos = 0;
      while (pos < list.size()) {
        const std::size_t next = list.find(',', pos);
        only.insert(std::stoi(list.substr(pos, next - pos)));
        pos = next == std::string::npos ? list.size() : next + 1;
      }
    } else if (std::strcmp(argv[i], "--image") == 0 && i + 1 < argc) {
      image_path = argv[++i];
    } else {
      fmt::print(stderr, "usage: acceptance [--strict] [--only N[,N...]] [--image PATH]\n");
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "multiplier consistency", 1.0, c1_multipliers},
      {2, "semiconjugacy", 1.0, c2_semiconjugacy},
      {3, "inner-function boundary modulus", 0.0, c3_boundary_modulus},
      {4, "Lebesgue invariance", 30.0, c4_invariance},
      {5, "harmonic measure closed form vs WoS", 120.0, c5_closed_form},
      {6, "support test", 0.0, c6_support},
      {7, "estimator cross-validation", 0.0, c7_cross_validation},
      {8, "radial trichotomy", 0.0, c8_radial},
      {9, "lift identities", 0.0, c9_lifts},
      {10, "spreading dichotomy", 0.0, c10_spreading},
      {11, "Baker-domain rendering", 120.0, c11_figure},
      {12, "symmetry suite", 0.0, c12_symmetry},
  };

  int passed = 0, failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt::format("{:.2f}s", secs);
    if (c.budget_s > 0.0) {
      timing += fmt::format(" of {:.0f}s", c.budget_s);
      if (secs >= c.budget_s) {
        v.pass = false;
        timing += " OVER BUDGET";
      }
    }
    (v.pass ? passed : failed)++;
    fmt::print("{} {:>2} {}: {} [{}]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail, timing);
    std::fflush(stdout);
  }
  fmt::print("acceptance: {} passed, {} failed\n", passed, failed);
  return strict && failed > 0 ? 1 : 0;
}
