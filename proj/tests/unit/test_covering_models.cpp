#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fatoulab/covering_models.hpp"
#include "fatoulab/errors.hpp"
#include "fatoulab/parallel.hpp"
#include "fatoulab/rng.hpp"
#include "fatoulab/stats.hpp"

using namespace fatoulab;
using namespace fatoulab::cover;

namespace {

const Complex I{0.0, 1.0};
const double E = std::exp(1.0);

// A disk point z is only known to ε|z|, and |π′(z)| = c|π(z)|/|1 − z²|, so the
// covering value there is uncertain by about cond(z). Residuals of identities
// between z and an image z′ are held to 1e−12 + cond(z) + cond(z′).
double cond(const CoveringModel& m, Complex z) {
  return 16.0 * 2.220446049250313e-16 * m.strip_scale() * std::abs(cover_eval(m, z)) /
         std::abs(1.0 - z * z);
}

double conditioning_bound(const CoveringModel& m, Complex z, Complex image) {
  return 1e-12 + cond(m, z) + cond(m, image);
}

Complex random_disk_point(CounterStream& rng, double rmax) {
  return std::polar(rmax * std::sqrt(rng.uniform()), rng.angle());
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

}  // namespace

TEST_CASE("model invariants") {
  const auto a = CoveringModel::annulus(E);
  CHECK(a.inner_radius() == doctest::Approx(1.0 / E));
  CHECK(a.outer_radius() == doctest::Approx(E));
  CHECK(a.strip_scale() == doctest::Approx(4.0 / kPi));
  CHECK(a.limit_set() == std::vector<Complex>{1.0, -1.0});
  CHECK(CoveringModel::punctured_disk().limit_set().size() == 1);
  CHECK(CoveringModel::disk().limit_set().empty());
  CHECK(kind_of([] { CoveringModel::annulus(1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { CoveringModel::annulus(2.0, 1.0); }) == ErrorKind::InvalidArgument);
  const auto g = CoveringModel::annulus(0.5, 8.0);  // k = 2, R = 4
  CHECK(g.R() == doctest::Approx(4.0));
  CHECK(g.rescale() == doctest::Approx(2.0));
  CHECK(g.inner_radius() == doctest::Approx(0.5));
  CHECK(g.outer_radius() == doctest::Approx(8.0));
}

TEST_CASE("deck generators have the documented type") {
  const auto ann = classify_mobius(CoveringModel::annulus(E).deck_generator());
  CHECK(ann.type == MobiusType::Hyperbolic);
  REQUIRE(ann.boundary_fixed_points.size() == 2);
  for (Complex p : ann.boundary_fixed_points) CHECK(std::abs(std::abs(p.real()) - 1.0) < 1e-12);
  const auto pd = classify_mobius(CoveringModel::punctured_disk().deck_generator());
  CHECK(pd.type == MobiusType::Parabolic);
  REQUIRE(pd.boundary_fixed_points.size() == 1);
  CHECK(std::abs(pd.boundary_fixed_points[0] - 1.0) < 1e-6);
}

TEST_CASE("cover_eval examples") {
  const auto a = CoveringModel::annulus(E);
  CHECK(cover_eval(a, 0.0) == Complex{1.0, 0.0});
  for (double t : {-0.999, -0.5, 0.1, 0.9, 0.999999}) {
    CHECK(std::abs(std::abs(cover_eval(a, t)) - 1.0) < 1e-15);
  }
  // independent composition: exp(i (4/π) · ½ log((1 + z)/(1 − z)))
  const Complex z{0.0, 0.5};
  const Complex oracle = std::exp(I * (4.0 / kPi) * 0.5 * std::log((1.0 + z) / (1.0 - z)));
  CHECK(std::abs(cover_eval(a, z) - oracle) < 1e-15);
  CHECK(kind_of([&] { cover_eval(a, 1.0); }) == ErrorKind::OutsideDisk);
  CHECK(kind_of([&] { deck_apply(a, Complex{0.0, 1.0}); }) == ErrorKind::OutsideDisk);
  // images stay strictly inside the annulus
  CounterStream rng(3, 0);
  for (int k = 0; k < 1000; ++k) {
    const double r = std::abs(cover_eval(a, random_disk_point(rng, 0.999)));
    REQUIRE(r > 1.0 / E);
    REQUIRE(r < E);
  }
}

TEST_CASE("deck generator examples") {
  const auto a = CoveringModel::annulus(E);
  const auto& g = a.deck_generator();
  CHECK(std::abs(g.apply(1.0) - 1.0) < 1e-15);
  CHECK(std::abs(g.apply(-1.0) + 1.0) < 1e-15);
  CHECK(a.strip_scale() * disk_artanh(deck_apply(a, 0.0)).real() == doctest::Approx(kTwoPi).epsilon(1e-12));
  const Complex z{0.3, 0.2};
  CHECK(std::abs(cover_eval(a, deck_apply(a, z)) - cover_eval(a, z)) < 1e-12);
}

TEST_CASE("covering relation holds for the deck group") {
  for (double R : {2.0, E, 10.0}) {
    const auto a = CoveringModel::annulus(R);
    CounterStream rng(17, 0);
    // for R = 10 the deck translation is large and every image hugs ±1
    for (int k = 0; k < 1000; ++k) {
      const Complex z = random_disk_point(rng, 0.99);
      const Complex image = deck_apply(a, z);
      const double residual = std::abs(cover_eval(a, image) - cover_eval(a, z));
      INFO("R = ", R, " z = ", z.real(), " ", z.imag(), " residual ", residual);
      if (std::abs(1.0 - image * image) > 1e-3 && std::abs(1.0 - z * z) > 1e-3) {
        REQUIRE(residual < 1e-12);
      } else {
        REQUIRE(residual < conditioning_bound(a, z, image));
      }
    }
  }
  const auto pd = CoveringModel::punctured_disk();
  CounterStream rng(18, 0);
  for (int k = 0; k < 1000; ++k) {
    const Complex z = random_disk_point(rng, 0.9);
    REQUIRE(std::abs(cover_eval(pd, deck_apply(pd, z)) - cover_eval(pd, z)) < 1e-12);
  }
}

TEST_CASE("preimages invert the covering") {
  const auto a = CoveringModel::annulus(0.5, 8.0);
  const Complex w = std::polar(1.7, 2.0);
  CHECK(std::abs(cover_eval(a, cover_preimage(a, w)) - w) < 1e-14);
  const auto pd = CoveringModel::punctured_disk();
  const Complex v = std::polar(0.3, -1.0);
  CHECK(std::abs(cover_eval(pd, cover_preimage(pd, v)) - v) < 1e-14);
}

TEST_CASE("rotation lift commutes with the covering") {
  for (double R : {2.0, E}) {
    const auto a = CoveringModel::annulus(R);
    for (double theta : {0.3, 1.0, kTwoPi * 0.6180339887498949}) {
      const auto lift = lift_map(a, a, zoo::MapSpec::rotation(theta));
      const auto& m = std::get<zoo::Mobius>(lift.kind());
      const auto cls = classify_mobius(m);
      CHECK(cls.type == MobiusType::Hyperbolic);
      REQUIRE(cls.boundary_fixed_points.size() == 2);
      for (Complex mult : cls.multipliers) {
        CHECK(std::abs(mult.imag()) < 1e-12);
        CHECK(std::abs(mult.real() - 1.0) > 1e-3);
      }
      // translation length in the strip coordinate s = artanh z is θ/c
      CHECK(cls.translation_length == doctest::Approx(2.0 * theta / a.strip_scale()).epsilon(1e-10));
      CounterStream rng(23, 0);
      for (int k = 0; k < 1000; ++k) {
        const Complex z = random_disk_point(rng, 0.99);
        const Complex image = m.apply(z);
        const double residual = std::abs(cover_eval(a, image) - std::polar(1.0, theta) * cover_eval(a, z));
        INFO("R = ", R, " theta = ", theta, " residual ", residual);
        REQUIRE(residual < (std::abs(1.0 - image * image) > 1e-3 ? 1e-12 : conditioning_bound(a, z, image)));
      }
    }
  }
  const auto a = CoveringModel::annulus(E);
  const auto id = lift_map(a, a, zoo::MapSpec::rotation(0.0));
  CHECK(std::get<zoo::Mobius>(id.kind()).is_identity(0.0));
}

TEST_CASE("power map chain lifts to the identity") {
  const auto src = CoveringModel::annulus(E);
  for (int d : {2, 3}) {
    const auto dst = CoveringModel::annulus(std::pow(E, d));
    const auto lift = lift_map(src, dst, zoo::MapSpec::power_map(d));
    const auto& m = std::get<zoo::Mobius>(lift.kind());
    CHECK(m.is_identity(0.0));
    CounterStream rng(29, 0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const Complex z = random_disk_point(rng, 0.99);
      const Complex w = cover_eval(src, z);
      worst = std::max(worst, std::abs(cover_eval(dst, m.apply(z)) - std::pow(w, d)));
    }
    INFO("d = ", d, " residual ", worst);
    CHECK(worst < 1e-12);
  }
  CHECK(kind_of([&] { lift_map(src, src, zoo::MapSpec::power_map(2)); }) == ErrorKind::Unsupported);
  CHECK(kind_of([&] { lift_map(src, src, zoo::MapSpec::exp_baker(0.3)); }) == ErrorKind::Unsupported);
}

TEST_CASE("radial classification on the annulus") {
  const auto a = CoveringModel::annulus(E);
  const auto at_one = radial_classify(a, 1.0);
  CHECK(at_one.verdict == RadialVerdict::Bounded);
  // the radius maps onto the core circle: constant distance 1 − 1/e
  CHECK(at_one.min_boundary_distance == doctest::Approx(1.0 - 1.0 / E));
  CHECK(radial_classify(a, -1.0).verdict == RadialVerdict::Bounded);
  const auto at_i = radial_classify(a, I);
  CHECK(at_i.verdict == RadialVerdict::Escaping);
  CHECK(at_i.last_boundary_distance < at_i.eps_escape);
  CHECK(at_i.samples_used == 52);
  for (int j = 1; j < 64; ++j) {
    if (j == 32) continue;
    const auto c = radial_classify(a, std::polar(1.0, kTwoPi * j / 64.0));
    INFO("j = ", j, " last distance ", c.last_boundary_distance);
    CHECK(c.verdict == RadialVerdict::Escaping);
  }
}

TEST_CASE("radial classification on the disks") {
  CHECK(radial_classify(CoveringModel::disk(), std::polar(1.0, 0.4)).verdict == RadialVerdict::Escaping);
  // punctured disk: radius to 1 runs into the puncture, other radii reach |w| = 1
  CHECK(radial_classify(CoveringModel::punctured_disk(), -1.0).verdict == RadialVerdict::Escaping);
  CHECK(kind_of([] { radial_classify(CoveringModel::disk(), 0.5); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("classifier branches on synthetic trails") {
  RadialConfig cfg;
  cfg.samples = 40;
  std::vector<double> bungee(40, 0.5);
  for (int k = 20; k < 40; ++k) bungee[k] = (k % 2 == 0) ? 1e-8 : 0.5;
  CHECK(classify_distances(bungee, cfg).verdict == RadialVerdict::Bungee);
  CHECK(classify_distances(bungee, cfg).tail_crossings >= 3);
  std::vector<double> flat(40, 1e-4);
  CHECK(classify_distances(flat, cfg).verdict == RadialVerdict::Undetermined);
  std::vector<double> rising(40, 1e-7);
  rising[39] = 2e-7;
  CHECK(classify_distances(rising, cfg).verdict == RadialVerdict::Undetermined);
}

TEST_CASE("push-forward split and totals") {
  const auto a = CoveringModel::annulus(E);
  const std::uint64_t n = 200000;
  const auto r = pushforward_measure(a, n, 16, 99);
  REQUIRE(r.hists.size() == 2);
  CHECK(r.hists[0].total() + r.hists[1].total() == n);
  CHECK(r.component_masses[0] + r.component_masses[1] == doctest::Approx(1.0));
  const double p = static_cast<double>(r.hists[1].total()) / n;
  CHECK(std::abs(p - 0.5) < 3.0 * std::sqrt(0.25 / n));
  CHECK(r.base == Complex{1.0, 0.0});
}

TEST_CASE("push-forward on the disk is uniform") {
  const std::uint64_t n = 100000;
  const auto r = pushforward_measure(CoveringModel::disk(), n, 64, 5);
  REQUIRE(r.hists.size() == 1);
  std::vector<double> obs, exp;
  for (auto c : r.hists[0].counts) {
    obs.push_back(static_cast<double>(c));
    exp.push_back(static_cast<double>(n) / 64.0);
  }
  CHECK(stats::chi_square(obs, exp) < stats::chi_square_critical_001(63));
}

// Reference masses (inner bins, then outer bins) of harmonic measure computed
// at 30 digits by tools/oracles.py through the Poisson kernel and radial limits.
TEST_CASE("push-forward matches reference arc masses") {
  struct Case {
    double R;
    Complex base;
    std::vector<double> masses;
  };
  const std::vector<Case> cases{
      {E, 1.0, {0.15985039442851248, 0.063412533103436023, 0.019543877483229269, 0.0071931949848222313,
                0.0071931949848222313, 0.019543877483229269, 0.063412533103436023, 0.15985039442851248,
                0.15985039442851248, 0.063412533103436023, 0.019543877483229269, 0.0071931949848222313,
                0.0071931949848222313, 0.019543877483229269, 0.063412533103436023, 0.15985039442851248}},
      {2.0, std::polar(1.2, 0.7),
       {0.14968556499984047, 0.12601236734744869, 0.031429601295266033, 0.0056584699139260711,
        0.001194325437897487, 0.0015688053437237282, 0.0082568424439238733, 0.044676820301076732,
        0.29828154516329325, 0.22645363610589707, 0.035764516897279048, 0.0057834132808211497,
        0.0011981002100125263, 0.0015766169095766943, 0.0085276705306966851, 0.053931703819320491}},
  };
  for (const auto& c : cases) {
    const auto model = CoveringModel::annulus(c.R);
    const std::uint64_t n = 400000;
    const auto r = pushforward_measure(model, n, 8, 77, cover_preimage(model, c.base));
    CHECK(std::abs(r.base - c.base) < 1e-14);
    std::vector<double> obs, exp;
    for (const auto& h : r.hists) {
      for (auto k : h.counts) obs.push_back(static_cast<double>(k));
    }
    for (double m : c.masses) exp.push_back(m * static_cast<double>(n));
    const double chi = stats::chi_square(obs, exp);
    INFO("R = ", c.R, " chi2 = ", chi);
    CHECK(chi < stats::chi_square_critical_001(15));
  }
}

TEST_CASE("push-forward is deterministic across worker counts") {
  const auto a = CoveringModel::annulus(2.0);
  const int saved = worker_count();
  set_worker_count(1);
  const auto one = pushforward_measure(a, 20000, 32, 123);
  set_worker_count(3);
  const auto three = pushforward_measure(a, 20000, 32, 123);
  set_worker_count(saved);
  for (std::size_t k = 0; k < one.hists.size(); ++k) CHECK(one.hists[k].counts == three.hists[k].counts);
}

TEST_CASE("model json round trip") {
  for (const auto& m : {CoveringModel::annulus(E), CoveringModel::annulus(0.5, 8.0), CoveringModel::punctured_disk(),
                        CoveringModel::disk()}) {
    const auto j = to_json(m);
    CHECK(to_json(model_from_json(j)) == j);
  }
  CHECK(model_from_json(nlohmann::json{{"domain", "annulus"}, {"R", 3.0}}).R() == 3.0);
  CHECK(kind_of([] { model_from_json(nlohmann::json{{"domain", "annulus"}, {"R", -3.0}}); }) ==
        ErrorKind::InvalidArgument);
}
