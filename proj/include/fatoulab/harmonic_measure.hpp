#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "fatoulab/arc_histogram.hpp"
#include "fatoulab/core.hpp"
#include "fatoulab/covering_models.hpp"

namespace fatoulab::harmonic {

struct Bubble {
  Complex center;
  double radius;
};

enum class DomainKind { Annulus, ChampagneDisk, DiskMinusDisk };

/// Planar domain bounded by circles, with an exact distance to its boundary.
///
/// Component ids: Annulus 0 = inner circle, 1 = outer circle (as in the
/// covering models); ChampagneDisk and DiskMinusDisk 0 = unit circle, k + 1 =
/// bubble k.
class DomainOracle {
 public:
  static DomainOracle annulus(double r_in, double r_out);
  /// 𝔻 minus pairwise disjoint closed disks strictly inside it.
  static DomainOracle champagne(std::vector<Bubble> bubbles);
  static DomainOracle disk_minus_disk(Complex center, double radius);

  DomainKind kind() const { return kind_; }
  int component_count() const { return static_cast<int>(circles_.size()); }
  /// Boundary circle of a component.
  const Bubble& circle(int component) const { return circles_.at(component); }
  double diameter() const;

  struct Distance {
    double distance;  // negative outside the closed domain
    int component;
  };
  Distance distance(Complex z) const;

  std::string kind_name() const;

 private:
  DomainOracle() = default;

  DomainKind kind_ = DomainKind::Annulus;
  // circles_[k] bounds component k; for the annulus circles_[0] is inner
  std::vector<Bubble> circles_;
};

struct WalkResult {
  std::vector<ArcHistogram> hits;  // one per component, indexed by id
  std::uint64_t walks = 0;
  std::uint64_t stalled = 0;
  std::uint64_t seed = 0;
  double epsilon_shell = 0.0;
  std::uint64_t total_steps = 0;

  std::vector<double> component_masses() const;  // count / walks
};

struct WalkConfig {
  double epsilon_shell = 0.0;  // ≤ 0 selects 1e−6 · diameter
  std::uint64_t step_cap = 100000;
  std::size_t n_bins = 64;
  double max_stall_fraction = 1e-3;
};

/// Walk-on-Spheres exit distribution from `base`. Walk i draws only from
/// CounterStream(seed, i); counts are reduced in integers, so the result is
/// bit-identical for any worker count.
WalkResult walk_on_spheres(const DomainOracle& domain, Complex base, std::uint64_t walks,
                           std::uint64_t seed, const WalkConfig& cfg = {});

struct DeficientBin {
  int component;
  std::size_t bin;
  double mass;
};

struct SupportReport {
  bool pass;
  double min_bin_mass;        // threshold
  double smallest_observed;
  std::vector<DeficientBin> deficient;
};

SupportReport support_test(const WalkResult& result, double min_bin_mass);

struct CrossValidation {
  double tv_distance;
  double threshold;  // C / √walks
  bool pass;
  std::uint64_t wos_seed;
  std::uint64_t pushforward_seed;
  Complex base;
  WalkResult wos;
  cover::PushforwardResult pushforward;
};

/// WoS against the covering push-forward on the same annulus, both from
/// base = π(0). The push-forward seed is derived from `seed` so the two
/// estimators draw independent streams.
CrossValidation cross_validate(const DomainOracle& annulus, const cover::CoveringModel& model,
                               std::uint64_t walks, std::uint64_t seed, std::size_t n_bins = 32,
                               double c = 10.0);

// Closed forms ---------------------------------------------------------------

/// ω(z0, outer circle) on A(r_in, r_out): ln(|z0|/r_in) / ln(r_out/r_in).
double annulus_outer_mass(double r_in, double r_out, double rho);

/// Exact (component, bin) masses of harmonic measure on A(r_in, r_out) at z0,
/// in the cell order of cell_masses() (inner bins, then outer bins).
///
/// Outer density (1/2π)[p + 2Σ c_n cos n(ψ − φ)], c_n = (x^n − x^{−n})/(L^n − L^{−n}),
/// x = ρ/r_in, L = r_out/r_in; the inner density uses x = r_out/ρ.
std::vector<double> annulus_arc_masses(double r_in, double r_out, Complex z0, std::size_t n_bins);

nlohmann::json summary_json(const WalkResult& r);

}  // namespace fatoulab::harmonic
