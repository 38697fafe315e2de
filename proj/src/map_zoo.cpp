#include "fatoulab/map_zoo.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fatoulab/errors.hpp"

namespace fatoulab::zoo {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Distance below which an argument is taken to coincide with a singularity.
constexpr double kSingularityTol = 1e-300;

void require_alpha(double alpha, const char* kind) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw Error(ErrorKind::OutOfRange,
                fmt::format("{}: alpha must lie in (0, 1/2), got {}", kind, alpha));
  }
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

ComplexPoint finite_or_infinity(Complex z) {
  return finite(z) ? ComplexPoint(z) : ComplexPoint::infinity();
}

Complex ipow(Complex z, int n) {
  Complex result{1.0};
  Complex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

Complex checked_exp(Complex w, double cap, const char* kind) {
  if (std::abs(w.real()) > cap || !finite(w)) {
    throw Error(ErrorKind::Overflow,
                fmt::format("{}: exponent real part {} exceeds cap {}", kind, w.real(), cap));
  }
  return std::exp(w);
}

Complex require_finite_arg(ComplexPoint z, const MapSpec& map) {
  if (z.is_infinity()) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("{}: the point at infinity is not a valid argument",
                            map.kind_name()));
  }
  return z.value();
}

void check_singularities(const MapSpec& map, ComplexPoint z) {
  const auto& sing = map.singularities();
  for (std::size_t i = 0; i < sing.size(); ++i) {
    const bool hit = sing[i].is_infinity()
                         ? z.is_infinity()
                         : (!z.is_infinity() &&
                            std::abs(z.value() - sing[i].value()) <= kSingularityTol);
    if (hit) {
      throw Error(ErrorKind::SingularityHit,
                  fmt::format("{}: argument coincides with singularity #{}",
                              map.kind_name(), i));
    }
  }
}

Complex blaschke_factor(Complex z, Complex a) { return (z - a) / (1.0 - std::conj(a) * z); }

Complex blaschke_factor_derivative(Complex z, Complex a) {
  const Complex q = 1.0 - std::conj(a) * z;
  return (1.0 - std::norm(a)) / (q * q);
}

std::vector<Complex> poly_mul(const std::vector<Complex>& p, const std::vector<Complex>& q) {
  std::vector<Complex> r(p.size() + q.size() - 1, Complex{0.0});
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

std::vector<Complex> poly_derivative(const std::vector<Complex>& p) {
  if (p.size() <= 1) return {Complex{0.0}};
  std::vector<Complex> r(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) r[k - 1] = static_cast<double>(k) * p[k];
  return r;
}

Complex poly_eval(const std::vector<Complex>& p, Complex z) {
  Complex acc{0.0};
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<Complex> poly_sub(std::vector<Complex> p, const std::vector<Complex>& q) {
  if (p.size() < q.size()) p.resize(q.size(), Complex{0.0});
  for (std::size_t i = 0; i < q.size(); ++i) p[i] -= q[i];
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Mobius

Mobius Mobius::compose(const Mobius& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

bool Mobius::is_identity(double tol) const {
  // proportional to the identity matrix
  const double scale = std::max(std::abs(a), std::abs(d));
  return std::abs(b) <= tol * scale && std::abs(c) <= tol * scale &&
         std::abs(a - d) <= tol * scale;
}

std::vector<Complex> Mobius::fixed_points() const {
  if (is_identity()) return {};
  if (c == Complex{0.0}) {
    if (d == a) return {};  // translation: fixes only ∞
    return {b / (d - a)};
  }
  // c z² + (d − a) z − b = 0
  const Complex p = d - a;
  const Complex disc = std::sqrt(p * p + 4.0 * b * c);
  const Complex q = -0.5 * (p + (std::real(std::conj(p) * disc) >= 0.0 ? disc : -disc));
  if (q == Complex{0.0}) return {Complex{0.0}};
  const Complex z1 = q / c;
  const Complex z2 = -b / q;
  if (disc == Complex{0.0}) return {z1};
  return {z1, z2};
}

// ---------------------------------------------------------------------------
// MapSpec factories

MapSpec MapSpec::exp_baker(double alpha) {
  require_alpha(alpha, "ExpBaker");
  return MapSpec(ExpBaker{alpha}, {ComplexPoint(0.0, 0.0), ComplexPoint::infinity()},
                 std::vector<FixedPoint>{{ComplexPoint(1.0, 0.0), Complex(2.0 * alpha)}});
}

MapSpec MapSpec::sine_model(double alpha) {
  require_alpha(alpha, "SineModel");
  return MapSpec(SineModel{alpha}, {ComplexPoint::infinity()},
                 std::vector<FixedPoint>{{ComplexPoint(0.0, 0.0), Complex(2.0 * alpha)}});
}

MapSpec MapSpec::power_map(int degree) {
  if (degree < 1) {
    throw Error(ErrorKind::OutOfRange, fmt::format("PowerMap: degree must be >= 1, got {}", degree));
  }
  std::vector<FixedPoint> fixed;
  const Complex zero_mult = degree == 1 ? Complex(1.0) : Complex(0.0);
  fixed.push_back({ComplexPoint(0.0, 0.0), zero_mult});
  fixed.push_back({ComplexPoint::infinity(), zero_mult});
  if (degree >= 2) {
    for (int k = 0; k < degree - 1; ++k) {
      fixed.push_back({ComplexPoint(std::polar(1.0, kTwoPi * k / (degree - 1))),
                       Complex(static_cast<double>(degree))});
    }
  }
  return MapSpec(PowerMap{degree}, {}, std::move(fixed));
}

MapSpec MapSpec::rotation(double theta) {
  if (!std::isfinite(theta)) throw Error(ErrorKind::InvalidArgument, "Rotation: angle not finite");
  return MapSpec(Rotation{theta}, {},
                 std::vector<FixedPoint>{{ComplexPoint(0.0, 0.0), std::polar(1.0, theta)}});
}

MapSpec MapSpec::mobius(Complex a, Complex b, Complex c, Complex d) {
  const Mobius m{a, b, c, d};
  if (std::abs(m.det()) == 0.0 || !finite(a) || !finite(b) || !finite(c) || !finite(d)) {
    throw Error(ErrorKind::InvalidArgument, "Mobius: coefficients must satisfy ad - bc != 0");
  }
  std::vector<ComplexPoint> poles;
  if (c != Complex{0.0}) poles.emplace_back(-d / c);
  std::vector<FixedPoint> fixed;
  for (Complex z : m.fixed_points()) fixed.push_back({ComplexPoint(z), m.derivative(z)});
  return MapSpec(m, std::move(poles), std::move(fixed));
}

MapSpec MapSpec::finite_blaschke(std::vector<Complex> zeros, Complex rotation) {
  for (Complex a : zeros) {
    if (!(std::abs(a) < 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "FiniteBlaschke: zeros must lie in the open unit disk");
    }
  }
  if (std::abs(std::abs(rotation) - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "FiniteBlaschke: rotation factor must have modulus 1");
  }
  std::vector<ComplexPoint> poles;
  for (Complex a : zeros) {
    if (a != Complex{0.0}) poles.emplace_back(1.0 / std::conj(a));
  }
  return MapSpec(FiniteBlaschke{std::move(zeros), rotation}, std::move(poles), std::nullopt);
}

MapSpec MapSpec::keen(double alpha, Complex lambda) {
  if (!std::isfinite(alpha) || !finite(lambda)) {
    throw Error(ErrorKind::InvalidArgument, "Keen: parameters must be finite");
  }
  return MapSpec(Keen{alpha, lambda}, {ComplexPoint(0.0, 0.0), ComplexPoint::infinity()},
                 std::nullopt);
}

MapSpec MapSpec::mcmullen(int m, int l, Complex c) {
  if (m < 1 || l < 1) {
    throw Error(ErrorKind::OutOfRange, "McMullen: exponents m and l must be >= 1");
  }
  if (c == Complex{0.0} || !finite(c)) {
    throw Error(ErrorKind::InvalidArgument, "McMullen: c must be finite and non-zero");
  }
  std::vector<FixedPoint> fixed{{ComplexPoint::infinity(), m >= 2 ? Complex(0.0) : Complex(1.0)}};
  return MapSpec(McMullen{m, l, c}, {}, std::move(fixed));
}

std::string MapSpec::kind_name() const {
  return std::visit(overloaded{
                        [](const ExpBaker&) { return std::string("exp_baker"); },
                        [](const SineModel&) { return std::string("sine_model"); },
                        [](const PowerMap&) { return std::string("power_map"); },
                        [](const Rotation&) { return std::string("rotation"); },
                        [](const Mobius&) { return std::string("mobius"); },
                        [](const FiniteBlaschke&) { return std::string("finite_blaschke"); },
                        [](const Keen&) { return std::string("keen"); },
                        [](const McMullen&) { return std::string("mcmullen"); },
                    },
                    kind_);
}

bool MapSpec::punctured_plane() const {
  return std::holds_alternative<ExpBaker>(kind_) || std::holds_alternative<Keen>(kind_) ||
         std::holds_alternative<PowerMap>(kind_);
}

// ---------------------------------------------------------------------------
// Evaluation

ComplexPoint eval(const MapSpec& map, ComplexPoint zp, const EvalConfig& cfg) {
  check_singularities(map, zp);
  return std::visit(
      overloaded{
          [&](const ExpBaker& k) -> ComplexPoint {
            const Complex z = require_finite_arg(zp, map);
            return checked_exp(k.alpha * (z - 1.0 / z), cfg.exponent_cap, "ExpBaker");
          },
          [&](const SineModel& k) -> ComplexPoint {
            const Complex z = require_finite_arg(zp, map);
            if (std::abs(z.imag()) > cfg.exponent_cap) {
              throw Error(ErrorKind::Overflow, "SineModel: |Im z| exceeds exponent cap");
            }
            return 2.0 * k.alpha * std::sin(z);
          },
          [&](const PowerMap& k) -> ComplexPoint {
            if (zp.is_infinity()) return ComplexPoint::infinity();
            return finite_or_infinity(ipow(zp.value(), k.degree));
          },
          [&](const Rotation& k) -> ComplexPoint {
            return std::polar(1.0, k.theta) * require_finite_arg(zp, map);
          },
          [&](const Mobius& m) -> ComplexPoint { return m.apply(require_finite_arg(zp, map)); },
          [&](const FiniteBlaschke& k) -> ComplexPoint {
            const Complex z = require_finite_arg(zp, map);
            Complex acc = k.rotation;
            for (Complex a : k.zeros) acc *= blaschke_factor(z, a);
            return acc;
          },
          [&](const Keen& k) -> ComplexPoint {
            const Complex z = require_finite_arg(zp, map);
            return z * checked_exp(k.alpha * (z + 1.0 / z) + k.lambda, cfg.exponent_cap, "Keen");
          },
          [&](const McMullen& k) -> ComplexPoint {
            if (zp.is_infinity()) return ComplexPoint::infinity();
            const Complex z = zp.value();
            if (z == Complex{0.0}) return ComplexPoint::infinity();
            return finite_or_infinity(ipow(z, k.m) + k.c / ipow(z, k.l));
          },
      },
      map.kind());
}

ComplexPoint derivative(const MapSpec& map, ComplexPoint zp, const EvalConfig& cfg) {
  check_singularities(map, zp);
  return std::visit(
      overloaded{
          [&](const ExpBaker& k) -> ComplexPoint {
            const Complex z = require_finite_arg(zp, map);
            const Complex f = eval(map, zp, cfg).value();
            return f * k.alpha * (1.0 + 1.0 / (z * z));
          },
          [&](const SineModel& k) -> ComplexPoint {
            const Complex z = require_finite_arg(zp, map);
            if (std::abs(z.imag()) > cfg.exponent_cap) {
              throw Error(ErrorKind::Overflow, "SineModel: |Im z| exceeds exponent cap");
            }
            return 2.0 * k.alpha * std::cos(z);
          },
          [&](const PowerMap& k) -> ComplexPoint {
            const Complex z = require_finite_arg(zp, map);
            return finite_or_infinity(static_cast<double>(k.degree) * ipow(z, k.degree - 1));
          },
          [&](const Rotation& k) -> ComplexPoint {
            require_finite_arg(zp, map);
            return std::polar(1.0, k.theta);
          },
          [&](const Mobius& m) -> ComplexPoint {
            return m.derivative(require_finite_arg(zp, map));
          },
          [&](const FiniteBlaschke& k) -> ComplexPoint {
            const Complex z = require_finite_arg(zp, map);
            Complex sum{0.0};
            for (std::size_t i = 0; i < k.zeros.size(); ++i) {
              Complex term = blaschke_factor_derivative(z, k.zeros[i]);
              for (std::size_t j = 0; j < k.zeros.size(); ++j) {
                if (j != i) term *= blaschke_factor(z, k.zeros[j]);
              }
              sum += term;
            }
            return k.rotation * sum;
          },
          [&](const Keen& k) -> ComplexPoint {
            const Complex z = require_finite_arg(zp, map);
            const Complex f = eval(map, zp, cfg).value();
            return f * (1.0 / z + k.alpha * (1.0 - 1.0 / (z * z)));
          },
          [&](const McMullen& k) -> ComplexPoint {
            const Complex z = require_finite_arg(zp, map);
            if (z == Complex{0.0}) return ComplexPoint::infinity();
            return finite_or_infinity(static_cast<double>(k.m) * ipow(z, k.m - 1) -
                                      static_cast<double>(k.l) * k.c / ipow(z, k.l + 1));
          },
      },
      map.kind());
}

// ---------------------------------------------------------------------------
// Orbits

namespace {

std::size_t nearest_singularity(const MapSpec& map, ComplexPoint z) {
  const auto& sing = map.singularities();
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sing.size(); ++i) {
    double d;
    if (sing[i].is_infinity()) {
      d = z.is_infinity() ? 0.0 : 1.0 / std::abs(z.value());
    } else {
      d = z.is_infinity() ? std::numeric_limits<double>::infinity()
                          : std::abs(z.value() - sing[i].value());
    }
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

namespace {

// Shared driver; `record` sees every point, including z0.
template <class Record>
OrbitTerminal run_orbit(const MapSpec& map, ComplexPoint z0, std::size_t n_max,
                        double escape_radius, const std::optional<OrbitTarget>& target,
                        const EvalConfig& cfg, Record&& record) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "orbit: n_max must be >= 1");
  if (!(escape_radius > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "orbit: escape_radius must be positive");
  }
  const bool two_ended = map.punctured_plane();
  const double inner_radius = 1.0 / escape_radius;

  auto check = [&](ComplexPoint z) -> std::optional<OrbitTerminal> {
    if (z.is_infinity() || std::abs(z.value()) > escape_radius) {
      return terminal::Escaped{escape_radius, EscapeEnd::Infinity};
    }
    if (two_ended && std::abs(z.value()) < inner_radius) {
      return terminal::Escaped{escape_radius, EscapeEnd::Zero};
    }
    if (target && std::abs(z.value() - target->point) <= target->tolerance) {
      return terminal::Converged{target->point, target->tolerance};
    }
    return std::nullopt;
  };

  ComplexPoint z = z0;
  record(z);
  if (auto t = check(z)) return *t;
  for (std::size_t k = 0; k < n_max; ++k) {
    try {
      z = eval(map, z, cfg);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularityHit && e.kind() != ErrorKind::Overflow) throw;
      return terminal::HitSingularity{nearest_singularity(map, z)};
    }
    record(z);
    if (auto t = check(z)) return *t;
  }
  return terminal::Completed{};
}

}  // namespace

Orbit orbit(const MapSpec& map, ComplexPoint z0, std::size_t n_max, double escape_radius,
            std::optional<OrbitTarget> target, const EvalConfig& cfg) {
  Orbit out;
  out.terminal = run_orbit(map, z0, n_max, escape_radius, target, cfg,
                           [&](ComplexPoint z) { out.points.push_back(z); });
  return out;
}

OrbitOutcome orbit_outcome(const MapSpec& map, ComplexPoint z0, std::size_t n_max,
                           double escape_radius, std::optional<OrbitTarget> target,
                           const EvalConfig& cfg) {
  OrbitOutcome out{terminal::Completed{}, 0, z0};
  bool first = true;
  out.terminal = run_orbit(map, z0, n_max, escape_radius, target, cfg, [&](ComplexPoint z) {
    if (!first) ++out.steps;
    first = false;
    out.last = z;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Critical data

std::vector<CriticalPair> critical_data(const MapSpec& map) {
  std::vector<CriticalPair> out;
  auto add = [&](ComplexPoint p) { out.push_back({p, eval(map, p)}); };
  std::visit(
      overloaded{
          [&](const ExpBaker&) {
            add(ComplexPoint(0.0, 1.0));
            add(ComplexPoint(0.0, -1.0));
          },
          [&](const SineModel&) {
            add(ComplexPoint(kPi / 2.0, 0.0));
            add(ComplexPoint(-kPi / 2.0, 0.0));
          },
          [&](const PowerMap& k) {
            if (k.degree >= 2) {
              add(ComplexPoint(0.0, 0.0));
              add(ComplexPoint::infinity());
            }
          },
          [&](const Rotation&) {},
          [&](const Mobius&) {},
          [&](const FiniteBlaschke& k) {
            // B = λP/Q with P = ∏(z − a), Q = ∏(1 − conj(a) z); B′ ∝ P′Q − PQ′.
            std::vector<Complex> p{Complex{1.0}}, q{Complex{1.0}};
            for (Complex a : k.zeros) {
              p = poly_mul(p, {-a, Complex{1.0}});
              q = poly_mul(q, {Complex{1.0}, -std::conj(a)});
            }
            const auto num = poly_sub(poly_mul(poly_derivative(p), q), poly_mul(p, poly_derivative(q)));
            for (Complex z : polynomial_roots(num)) add(ComplexPoint(z));
          },
          [&](const Keen&) {
            throw Error(ErrorKind::Unsupported, "critical_data: no closed form for the Keen map");
          },
          [&](const McMullen& k) {
            // m z^{m+l} = l c
            const int n = k.m + k.l;
            const Complex r = std::pow(static_cast<double>(k.l) * k.c / static_cast<double>(k.m),
                                       1.0 / static_cast<double>(n));
            for (int j = 0; j < n; ++j) add(ComplexPoint(r * std::polar(1.0, kTwoPi * j / n)));
            if (k.l >= 2) add(ComplexPoint(0.0, 0.0));
            if (k.m >= 2) add(ComplexPoint::infinity());
          },
      },
      map.kind());
  return out;
}

// ---------------------------------------------------------------------------
// Root finding

double bisect(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a) || !(tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "bisect: need b > a and tol > 0");
  }
  double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!(fa * fb < 0.0)) {
    throw Error(ErrorKind::NoSignChange,
                fmt::format("bisect: f has the same sign at {} and {}", a, b));
  }
  while (b - a > tol) {
    const double m = a + 0.5 * (b - a);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return a + 0.5 * (b - a);
}

std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs) {
  double scale = 0.0;
  for (Complex c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) throw Error(ErrorKind::InvalidArgument, "polynomial_roots: zero polynomial");
  while (coeffs.size() > 1 && std::abs(coeffs.back()) <= 1e-13 * scale) coeffs.pop_back();
  const std::size_t n = coeffs.size() - 1;
  if (n == 0) return {};
  const Complex lead = coeffs.back();
  for (auto& c : coeffs) c /= lead;
  const auto dcoeffs = poly_derivative(coeffs);

  // Cauchy bound for the initial circle
  double bound = 0.0;
  for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::abs(coeffs[k]));
  const double radius = 0.5 * (1.0 + bound);
  std::vector<Complex> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    z[k] = std::polar(radius, kTwoPi * static_cast<double>(k) / static_cast<double>(n) + 0.4);
  }
  for (int iter = 0; iter < 500; ++iter) {
    double max_step = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Complex pk = poly_eval(coeffs, z[k]);
      if (pk == Complex{0.0}) continue;
      const Complex ratio = pk / poly_eval(dcoeffs, z[k]);
      Complex repulsion{0.0};
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      const Complex step = ratio / (1.0 - ratio * repulsion);
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step));
    }
    if (max_step <= 1e-15 * (1.0 + radius)) break;
  }
  for (auto& r : z) {
    for (int i = 0; i < 3; ++i) {
      const Complex d = poly_eval(dcoeffs, r);
      if (d == Complex{0.0}) break;
      r -= poly_eval(coeffs, r) / d;
    }
  }
  return z;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json cjson(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

Complex cfrom(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorKind::InvalidArgument, "complex parameters are [re, im] arrays");
  }
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

nlohmann::json to_json(const MapSpec& map) {
  nlohmann::json params = std::visit(
      overloaded{
          [](const ExpBaker& k) { return nlohmann::json{{"alpha", k.alpha}}; },
          [](const SineModel& k) { return nlohmann::json{{"alpha", k.alpha}}; },
          [](const PowerMap& k) { return nlohmann::json{{"degree", k.degree}}; },
          [](const Rotation& k) { return nlohmann::json{{"theta", k.theta}}; },
          [](const Mobius& m) {
            return nlohmann::json{{"a", cjson(m.a)}, {"b", cjson(m.b)}, {"c", cjson(m.c)}, {"d", cjson(m.d)}};
          },
          [](const FiniteBlaschke& k) {
            nlohmann::json zeros = nlohmann::json::array();
            for (Complex a : k.zeros) zeros.push_back(cjson(a));
            return nlohmann::json{{"zeros", zeros}, {"rotation", cjson(k.rotation)}};
          },
          [](const Keen& k) { return nlohmann::json{{"alpha", k.alpha}, {"lambda", cjson(k.lambda)}}; },
          [](const McMullen& k) { return nlohmann::json{{"m", k.m}, {"l", k.l}, {"c", cjson(k.c)}}; },
      },
      map.kind());
  return {{"kind", map.kind_name()}, {"params", params}};
}

MapSpec map_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const nlohmann::json& p = j.contains("params") ? j.at("params") : nlohmann::json::object();
    if (kind == "exp_baker") return MapSpec::exp_baker(p.at("alpha").get<double>());
    if (kind == "sine_model") return MapSpec::sine_model(p.at("alpha").get<double>());
    if (kind == "power_map") return MapSpec::power_map(p.at("degree").get<int>());
    if (kind == "rotation") return MapSpec::rotation(p.at("theta").get<double>());
    if (kind == "mobius") {
      return MapSpec::mobius(cfrom(p.at("a")), cfrom(p.at("b")), cfrom(p.at("c")), cfrom(p.at("d")));
    }
    if (kind == "finite_blaschke") {
      std::vector<Complex> zeros;
      for (const auto& z : p.at("zeros")) zeros.push_back(cfrom(z));
      const Complex rot = p.contains("rotation") ? cfrom(p.at("rotation")) : Complex{1.0};
      return MapSpec::finite_blaschke(std::move(zeros), rot);
    }
    if (kind == "keen") return MapSpec::keen(p.at("alpha").get<double>(), cfrom(p.at("lambda")));
    if (kind == "mcmullen") {
      return MapSpec::mcmullen(p.at("m").get<int>(), p.at("l").get<int>(), cfrom(p.at("c")));
    }
    throw Error(ErrorKind::InvalidArgument, fmt::format("unknown map kind '{}'", kind));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("malformed map JSON: {}", e.what()));
  }
}

}  // namespace fatoulab::zoo
