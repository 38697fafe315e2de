#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fatoulab/core.hpp"

namespace fatoulab::zoo {

/// z ↦ (az + b)/(cz + d) with ad − bc ≠ 0.
struct Mobius {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static Mobius identity() { return {}; }

  Complex det() const { return a * d - b * c; }
  Complex apply(Complex z) const { return (a * z + b) / (c * z + d); }
  Complex derivative(Complex z) const {
    const Complex q = c * z + d;
    return det() / (q * q);
  }
  /// this ∘ other
  Mobius compose(const Mobius& other) const;
  Mobius inverse() const { return {d, -b, -c, a}; }

  /// Finite fixed points (zero, one or two); empty for the identity.
  std::vector<Complex> fixed_points() const;
  bool is_identity(double tol = 0.0) const;
};

// Map kinds. Parameters are validated by the MapSpec factories.
struct ExpBaker {  // z ↦ exp(α(z − 1/z)), self-map of ℂ*
  double alpha;
};
struct SineModel {  // z ↦ 2α sin z
  double alpha;
};
struct PowerMap {  // z ↦ z^d
  int degree;
};
struct Rotation {  // z ↦ e^{iθ} z
  double theta;
};
struct FiniteBlaschke {  // z ↦ λ ∏ (z − a_k)/(1 − conj(a_k) z)
  std::vector<Complex> zeros;
  Complex rotation{1.0};
};
struct Keen {  // z ↦ z exp(α(z + 1/z) + λ)
  double alpha;
  Complex lambda;
};
struct McMullen {  // z ↦ z^m + c / z^l
  int m;
  int l;
  Complex c;
};

using MapKind =
    std::variant<ExpBaker, SineModel, PowerMap, Rotation, Mobius, FiniteBlaschke, Keen, McMullen>;

struct FixedPoint {
  ComplexPoint point;
  Complex multiplier;
};

/// A map from the zoo with its parameters, the points where it cannot be
/// evaluated in ℂ (essential singularities; for Möbius and Blaschke kinds also
/// the poles), and the fixed points known in closed form.
class MapSpec {
 public:
  static MapSpec exp_baker(double alpha);
  static MapSpec sine_model(double alpha);
  static MapSpec power_map(int degree);
  static MapSpec rotation(double theta);
  static MapSpec mobius(Complex a, Complex b, Complex c, Complex d);
  static MapSpec mobius(const Mobius& m) { return mobius(m.a, m.b, m.c, m.d); }
  static MapSpec finite_blaschke(std::vector<Complex> zeros, Complex rotation = 1.0);
  static MapSpec keen(double alpha, Complex lambda);
  static MapSpec mcmullen(int m, int l, Complex c);

  const MapKind& kind() const { return kind_; }
  const std::vector<ComplexPoint>& singularities() const { return singularities_; }
  const std::optional<std::vector<FixedPoint>>& fixed_points_known() const {
    return fixed_points_;
  }
  std::string kind_name() const;

  /// Self-maps of ℂ* for which both 0 and ∞ count as escape ends.
  bool punctured_plane() const;

 private:
  MapSpec(MapKind kind, std::vector<ComplexPoint> singularities,
          std::optional<std::vector<FixedPoint>> fixed_points)
      : kind_(std::move(kind)),
        singularities_(std::move(singularities)),
        fixed_points_(std::move(fixed_points)) {}

  MapKind kind_;
  std::vector<ComplexPoint> singularities_;
  std::optional<std::vector<FixedPoint>> fixed_points_;
};

/// Exponential kinds refuse arguments whose exponent has |Re| above the cap:
/// the result would overflow to ∞ or underflow onto the singularity at 0.
inline constexpr double kDefaultExponentCap = 700.0;

struct EvalConfig {
  double exponent_cap = kDefaultExponentCap;
};

ComplexPoint eval(const MapSpec& map, ComplexPoint z, const EvalConfig& cfg = {});
ComplexPoint derivative(const MapSpec& map, ComplexPoint z, const EvalConfig& cfg = {});

enum class EscapeEnd { Zero, Infinity };

namespace terminal {
struct Completed {};
struct Escaped {
  double radius;
  EscapeEnd end;
};
struct HitSingularity {
  std::size_t index;  // into MapSpec::singularities()
};
struct Converged {
  Complex target;
  double tolerance;
};
}  // namespace terminal

using OrbitTerminal = std::variant<terminal::Completed, terminal::Escaped,
                                   terminal::HitSingularity, terminal::Converged>;

struct Orbit {
  std::vector<ComplexPoint> points;
  OrbitTerminal terminal;

  std::size_t steps() const { return points.empty() ? 0 : points.size() - 1; }
};

struct OrbitTarget {
  Complex point;
  double tolerance;
};

/// Iterates until n_max steps, escape (|z| > R, or |z| < 1/R for ℂ* maps), a
/// singularity, or arrival within tolerance of the target. Evaluation errors
/// end the orbit as HitSingularity rather than throwing.
Orbit orbit(const MapSpec& map, ComplexPoint z0, std::size_t n_max, double escape_radius,
            std::optional<OrbitTarget> target = std::nullopt, const EvalConfig& cfg = {});

/// The same iteration without storing the points.
struct OrbitOutcome {
  OrbitTerminal terminal;
  std::size_t steps;
  ComplexPoint last;
};
OrbitOutcome orbit_outcome(const MapSpec& map, ComplexPoint z0, std::size_t n_max,
                           double escape_radius, std::optional<OrbitTarget> target = std::nullopt,
                           const EvalConfig& cfg = {});

struct CriticalPair {
  ComplexPoint point;
  ComplexPoint value;
};

/// Critical points with their images. For the sine model only the two
/// representatives ±π/2 are returned; the rest are their 2π-translates.
///
/// Baker's map f(z) = exp(α(z − 1/z)): f′ = 0 exactly at z = ±i, so ±i are
/// critical points and exp(±2iα) the critical values.
std::vector<CriticalPair> critical_data(const MapSpec& map);

/// Bisection for a sign change of f on [a, b]. Returns the midpoint of the
/// final bracket once its width is at most tol.
double bisect(const std::function<double(double)>& f, double a, double b, double tol);

/// Roots of the polynomial Σ coeffs[k] z^k (Aberth–Ehrlich iteration followed
/// by Newton polishing). Leading coefficients that are zero relative to the
/// largest are dropped.
std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs);

nlohmann::json to_json(const MapSpec& map);
MapSpec map_from_json(const nlohmann::json& j);

}  // namespace fatoulab::zoo
