#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fatoulab/blaschke_baker.hpp"
#include "fatoulab/core.hpp"
#include "fatoulab/map_zoo.hpp"

namespace fatoulab::circle {

struct Rotation {
  double theta;
};
struct Power {
  int degree;  // ≥ 1
};
struct MobiusBoundary {
  zoo::Mobius m;  // preserves 𝔻
};
struct BlaschkeBoundary {
  std::shared_ptr<const baker::BlaschkeProduct> product;
  double target_err;
};
struct FiniteBlaschkeBoundary {
  zoo::MapSpec spec;  // kind FiniteBlaschke
};

/// Boundary map g* of an inner function, acting on angles in [0, 2π). Every
/// kind preserves orientation on ∂𝔻.
class CircleMap {
 public:
  using Kind = std::variant<Rotation, Power, MobiusBoundary, BlaschkeBoundary, FiniteBlaschkeBoundary>;

  static CircleMap rotation(double theta);
  static CircleMap power(int degree);
  /// Rejects maps that do not send 𝔻 onto itself.
  static CircleMap mobius(const zoo::Mobius& m);
  static CircleMap blaschke(std::shared_ptr<const baker::BlaschkeProduct> product,
                            double target_err = 1e-12);
  static CircleMap finite_blaschke(std::vector<Complex> zeros, Complex rotation = 1.0);
  /// z ↦ z (a − z)/(1 − ā z): fixes 0 with g′(0) = a.
  static CircleMap single_zero_factor(Complex a);

  const Kind& kind() const { return kind_; }
  std::string kind_name() const;

  /// g*(θ) reduced to [0, 2π). Blaschke kinds throw SingularityApproach
  /// inside the exclusion zones around their boundary singularities.
  double apply(double theta) const;

  /// Whether the disk extension fixes 0.
  bool fixes_origin() const;
  /// |g′(0)|; throws OriginNotFixed unless fixes_origin().
  double derivative_at_zero_modulus() const;

  nlohmann::json to_json() const;

 private:
  explicit CircleMap(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// [g(θ0), g²(θ0), …, gⁿ(θ0)].
std::vector<double> iterate(const CircleMap& map, double theta0, std::size_t n);

/// Orbit of a Lebesgue-typical point under θ ↦ dθ, computed exactly as a shift
/// of base-d digits drawn from CounterStream(seed, 0). Iterating in floating
/// point instead collapses every orbit onto 0 within ~53/log2(d) steps.
std::vector<double> power_typical_orbit(int degree, std::size_t n, std::uint64_t seed);

/// Star discrepancy of the samples (as fractions of 2π) against Lebesgue
/// measure: 1/(2N) + max_i |x_(i) − (2i − 1)/(2N)|.
double discrepancy(std::span<const double> angles);

double birkhoff_average(std::span<const double> orbit, const std::function<double(double)>& observable);

struct Arc {
  double start;
  double length;  // in (0, 2π]
};

/// Arc spreading measured on 2¹⁴ reference cells. The arc is sampled at `grid`
/// equally spaced points; the image of the piece between consecutive samples
/// is the counter-clockwise arc between their images, and a cell counts as
/// covered when some image piece meets it. Stops at the first full cover.
struct SpreadReport {
  Arc initial_arc;
  std::size_t iterations = 0;            // iterations performed
  double initial_fraction = 0.0;
  std::vector<double> covered_fraction;  // entry k − 1 after iteration k
  std::optional<std::size_t> first_full_cover;

  nlohmann::json to_json() const;
};

inline constexpr std::size_t kReferenceCells = std::size_t{1} << 14;

SpreadReport arc_spread(const CircleMap& map, Arc arc, std::size_t n_max, std::size_t grid = 4096);
/// Non-autonomous version: iteration k applies maps[k − 1].
SpreadReport arc_spread_sequence(std::span<const CircleMap> maps, Arc arc, std::size_t grid = 4096);

/// [G_0(θ0), …, G_{n−1}(θ0)] with G_k = g_k ∘ … ∘ g_0.
std::vector<double> compose_sequence(std::span<const CircleMap> maps, double theta0);
/// Σ (1 − |g_n′(0)|).
double pommerenke_sum(std::span<const CircleMap> maps);

struct InvarianceReport {
  double ks;
  double critical_1pct;
  bool pass;
  std::size_t n_samples;
  std::uint64_t seed;
  std::uint64_t redraws;  // samples redrawn from inside singularity exclusion zones
};

/// KS distance between Lebesgue measure and the image of n uniform angles
/// (sample i from CounterStream(seed, i)) under one application of the map.
InvarianceReport invariance_test(const CircleMap& map, std::size_t n_samples, std::uint64_t seed);

std::string orbit_csv(std::span<const double> orbit);

}  // namespace fatoulab::circle
