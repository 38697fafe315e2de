#include "fatoulab/circle_dynamics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "fatoulab/errors.hpp"
#include "fatoulab/parallel.hpp"
#include "fatoulab/rng.hpp"
#include "fatoulab/stats.hpp"

namespace fatoulab::circle {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

CircleMap CircleMap::rotation(double theta) {
  if (!std::isfinite(theta)) throw Error(ErrorKind::InvalidArgument, "rotation angle must be finite");
  return CircleMap(Rotation{theta});
}

CircleMap CircleMap::power(int degree) {
  if (degree < 1) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("power map degree must be >= 1, got {}", degree));
  }
  return CircleMap(Power{degree});
}

CircleMap CircleMap::mobius(const zoo::Mobius& m) {
  if (std::abs(m.det()) == 0.0) throw Error(ErrorKind::InvalidArgument, "singular Möbius map");
  for (int k = 0; k < 8; ++k) {
    const Complex w = m.apply(std::polar(1.0, kTwoPi * k / 8.0 + 0.1));
    if (!(std::abs(std::abs(w) - 1.0) < 1e-12)) {
      throw Error(ErrorKind::InvalidArgument, "Möbius map does not preserve the unit circle");
    }
  }
  // the pole of a disk automorphism lies outside the closed disk
  if (!(std::abs(m.d) > std::abs(m.c))) {
    throw Error(ErrorKind::InvalidArgument, "Möbius map does not send the unit disk onto itself");
  }
  return CircleMap(MobiusBoundary{m});
}

CircleMap CircleMap::blaschke(std::shared_ptr<const baker::BlaschkeProduct> product, double target_err) {
  if (!product) throw Error(ErrorKind::InvalidArgument, "null Blaschke product");
  if (!(target_err > 0.0)) throw Error(ErrorKind::InvalidArgument, "target_err must be positive");
  return CircleMap(BlaschkeBoundary{std::move(product), target_err});
}

CircleMap CircleMap::finite_blaschke(std::vector<Complex> zeros, Complex rotation) {
  return CircleMap(FiniteBlaschkeBoundary{zoo::MapSpec::finite_blaschke(std::move(zeros), rotation)});
}

CircleMap CircleMap::single_zero_factor(Complex a) { return finite_blaschke({0.0, a}, -1.0); }

std::string CircleMap::kind_name() const {
  return std::visit(Overloaded{[](const Rotation&) { return "rotation"; },
                               [](const Power&) { return "power"; },
                               [](const MobiusBoundary&) { return "mobius"; },
                               [](const BlaschkeBoundary&) { return "blaschke"; },
                               [](const FiniteBlaschkeBoundary&) { return "finite_blaschke"; }},
                    kind_);
}

double CircleMap::apply(double theta) const {
  return std::visit(
      Overloaded{
          [&](const Rotation& r) { return wrap_angle(theta + r.theta); },
          [&](const Power& p) { return wrap_angle(static_cast<double>(p.degree) * theta); },
          [&](const MobiusBoundary& m) { return angle_of(m.m.apply(std::polar(1.0, theta))); },
          [&](const BlaschkeBoundary& b) {
            try {
              return wrap_angle(b.product->circle_eval(theta, b.target_err));
            } catch (const TooCloseToSingularity& e) {
              throw Error(ErrorKind::SingularityApproach,
                          fmt::format("angle {} enters a singularity exclusion zone: {}", theta, e.what()));
            }
          },
          [&](const FiniteBlaschkeBoundary& f) {
            const ComplexPoint w = zoo::eval(f.spec, Complex(std::polar(1.0, theta)));
            if (w.is_infinity()) {
              throw Error(ErrorKind::SingularityApproach, "finite Blaschke boundary value is infinite");
            }
            return angle_of(w.value());
          }},
      kind_);
}

bool CircleMap::fixes_origin() const {
  return std::visit(
      Overloaded{[](const Rotation&) { return true; },
                 [](const Power&) { return true; },
                 [](const MobiusBoundary& m) { return m.m.b == Complex{0.0}; },
                 [](const BlaschkeBoundary&) { return true; },
                 [](const FiniteBlaschkeBoundary& f) {
                   const auto& zeros = std::get<zoo::FiniteBlaschke>(f.spec.kind()).zeros;
                   return std::any_of(zeros.begin(), zeros.end(),
                                      [](Complex a) { return a == Complex{0.0}; });
                 }},
      kind_);
}

double CircleMap::derivative_at_zero_modulus() const {
  if (!fixes_origin()) {
    throw Error(ErrorKind::OriginNotFixed, fmt::format("{} map does not fix the origin", kind_name()));
  }
  return std::visit(
      Overloaded{[](const Rotation&) { return 1.0; },
                 [](const Power& p) { return p.degree == 1 ? 1.0 : 0.0; },
                 [](const MobiusBoundary& m) { return std::abs(m.m.a / m.m.d); },
                 [](const BlaschkeBoundary& b) { return b.product->derivative_at_zero(); },
                 [](const FiniteBlaschkeBoundary& f) {
                   const auto& zeros = std::get<zoo::FiniteBlaschke>(f.spec.kind()).zeros;
                   double prod = 1.0;
                   bool origin_seen = false;
                   for (Complex a : zeros) {
                     if (a == Complex{0.0} && !origin_seen) {
                       origin_seen = true;
                     } else {
                       prod *= std::abs(a);
                     }
                   }
                   return prod;
                 }},
      kind_);
}

nlohmann::json CircleMap::to_json() const {
  nlohmann::json j{{"kind", kind_name()}};
  std::visit(Overloaded{[&](const Rotation& r) { j["theta"] = r.theta; },
                        [&](const Power& p) { j["degree"] = p.degree; },
                        [&](const MobiusBoundary& m) {
                          j["coefficients"] = {{m.m.a.real(), m.m.a.imag()}, {m.m.b.real(), m.m.b.imag()},
                                               {m.m.c.real(), m.m.c.imag()}, {m.m.d.real(), m.m.d.imag()}};
                        },
                        [&](const BlaschkeBoundary& b) {
                          j["alpha"] = b.product->alpha();
                          j["s"] = b.product->s();
                          j["target_err"] = b.target_err;
                        },
                        [&](const FiniteBlaschkeBoundary& f) { j["map"] = zoo::to_json(f.spec); }},
             kind_);
  return j;
}

std::vector<double> iterate(const CircleMap& map, double theta0, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  double theta = wrap_angle(theta0);
  for (std::size_t k = 0; k < n; ++k) {
    theta = map.apply(theta);
    out.push_back(theta);
  }
  return out;
}

std::vector<double> power_typical_orbit(int degree, std::size_t n, std::uint64_t seed) {
  if (degree < 2) throw Error(ErrorKind::InvalidArgument, "power_typical_orbit needs degree >= 2");
  const double d = static_cast<double>(degree);
  // window of K digits resolves the angle to below one ulp of 2π
  const std::size_t K = static_cast<std::size_t>(std::ceil(54.0 / std::log2(d))) + 1;
  CounterStream rng(seed, 0);
  std::vector<int> digits(n + K);
  for (auto& dig : digits) {
    dig = std::min(degree - 1, static_cast<int>(rng.uniform() * d));
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double x = 0.0;
    for (std::size_t j = K; j-- > 0;) x = (x + digits[k + j]) / d;
    out.push_back(wrap_angle(kTwoPi * x));
  }
  return out;
}

double discrepancy(std::span<const double> angles) {
  if (angles.empty()) throw Error(ErrorKind::EmptyInput, "discrepancy of an empty sample");
  std::vector<double> x;
  x.reserve(angles.size());
  for (double a : angles) x.push_back(wrap_angle(a) / kTwoPi);
  std::sort(x.begin(), x.end());
  const double N = static_cast<double>(x.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(x[i] - (2.0 * static_cast<double>(i) + 1.0) / (2.0 * N)));
  }
  return 1.0 / (2.0 * N) + worst;
}

double birkhoff_average(std::span<const double> orbit, const std::function<double(double)>& observable) {
  if (orbit.empty()) throw Error(ErrorKind::EmptyInput, "Birkhoff average of an empty orbit");
  double sum = 0.0;
  for (double t : orbit) sum += observable(t);
  return sum / static_cast<double>(orbit.size());
}

namespace {

constexpr double kCellWidth = kTwoPi / static_cast<double>(kReferenceCells);

// Marks the cells met by the counter-clockwise arcs between consecutive points.
double covered_fraction(const std::vector<double>& pts) {
  std::vector<char> cell(kReferenceCells, 0);
  const auto cell_of = [](double a) {
    return std::min(kReferenceCells - 1, static_cast<std::size_t>(a / kCellWidth));
  };
  for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
    const double from = pts[j];
    const double len = wrap_angle(pts[j + 1] - from);
    const std::size_t first = cell_of(from);
    const std::size_t span = static_cast<std::size_t>(std::floor((from - static_cast<double>(first) * kCellWidth + len) / kCellWidth));
    if (span + 1 >= kReferenceCells) return 1.0;
    for (std::size_t k = 0; k <= span; ++k) cell[(first + k) % kReferenceCells] = 1;
  }
  if (pts.size() == 1) cell[cell_of(pts[0])] = 1;
  const auto hit = std::count(cell.begin(), cell.end(), 1);
  return static_cast<double>(hit) / static_cast<double>(kReferenceCells);
}

std::vector<double> arc_samples(Arc arc, std::size_t grid) {
  if (!(arc.length > 0.0 && arc.length <= kTwoPi)) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("arc length must lie in (0, 2π], got {}", arc.length));
  }
  if (grid < 1024) throw Error(ErrorKind::InvalidArgument, "arc grid must be at least 2^10 points");
  std::vector<double> pts(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    pts[j] = wrap_angle(arc.start + arc.length * static_cast<double>(j) / static_cast<double>(grid - 1));
  }
  return pts;
}

template <class MapAt>
SpreadReport spread(Arc arc, std::size_t n_max, std::size_t grid, MapAt map_at) {
  std::vector<double> pts = arc_samples(arc, grid);
  SpreadReport rep;
  rep.initial_arc = arc;
  rep.initial_fraction = covered_fraction(pts);
  for (std::size_t k = 1; k <= n_max; ++k) {
    const CircleMap& g = map_at(k - 1);
    parallel_for(pts.size(), [&](std::size_t j) { pts[j] = g.apply(pts[j]); });
    const double f = covered_fraction(pts);
    rep.covered_fraction.push_back(f);
    rep.iterations = k;
    if (f >= 1.0) {
      rep.first_full_cover = k;
      break;
    }
  }
  return rep;
}

}  // namespace

SpreadReport arc_spread(const CircleMap& map, Arc arc, std::size_t n_max, std::size_t grid) {
  return spread(arc, n_max, grid, [&](std::size_t) -> const CircleMap& { return map; });
}

SpreadReport arc_spread_sequence(std::span<const CircleMap> maps, Arc arc, std::size_t grid) {
  return spread(arc, maps.size(), grid, [&](std::size_t k) -> const CircleMap& { return maps[k]; });
}

nlohmann::json SpreadReport::to_json() const {
  nlohmann::json j{{"initial_arc", {{"start", initial_arc.start}, {"length", initial_arc.length}}},
                   {"iterations", iterations},
                   {"initial_fraction", initial_fraction},
                   {"covered_fraction", covered_fraction},
                   {"reference_cells", kReferenceCells}};
  j["first_full_cover"] = first_full_cover ? nlohmann::json(*first_full_cover) : nlohmann::json(nullptr);
  return j;
}

namespace {

void require_origin_fixed(std::span<const CircleMap> maps) {
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (!maps[k].fixes_origin()) {
      throw Error(ErrorKind::OriginNotFixed,
                  fmt::format("map {} ({}) does not fix the origin", k, maps[k].kind_name()));
    }
  }
}

}  // namespace

std::vector<double> compose_sequence(std::span<const CircleMap> maps, double theta0) {
  require_origin_fixed(maps);
  std::vector<double> out;
  out.reserve(maps.size());
  double theta = wrap_angle(theta0);
  for (const auto& g : maps) {
    theta = g.apply(theta);
    out.push_back(theta);
  }
  return out;
}

double pommerenke_sum(std::span<const CircleMap> maps) {
  require_origin_fixed(maps);
  double sum = 0.0;
  for (const auto& g : maps) sum += 1.0 - g.derivative_at_zero_modulus();
  return sum;
}

InvarianceReport invariance_test(const CircleMap& map, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw Error(ErrorKind::EmptyInput, "invariance_test needs samples");
  std::vector<double> u(n_samples);
  std::vector<std::uint32_t> redraws(n_samples, 0);
  parallel_for(n_samples, [&](std::size_t i) {
    CounterStream rng(seed, i);
    for (;;) {
      try {
        u[i] = map.apply(rng.angle()) / kTwoPi;
        return;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularityApproach || redraws[i] > 1000) throw;
        ++redraws[i];
      }
    }
  });
  std::uint64_t total_redraws = 0;
  for (auto r : redraws) total_redraws += r;
  const double ks = stats::ks_uniform(std::move(u));
  const double crit = stats::ks_critical_1pct(n_samples);
  return {ks, crit, ks < crit, n_samples, seed, total_redraws};
}

std::string orbit_csv(std::span<const double> orbit) {
  std::string s = "iteration,angle_rad\n";
  for (std::size_t k = 0; k < orbit.size(); ++k) s += fmt::format("{},{:.17g}\n", k, orbit[k]);
  return s;
}

}  // namespace fatoulab::circle
