#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fatoulab/arc_histogram.hpp"
#include "fatoulab/core.hpp"
#include "fatoulab/map_zoo.hpp"

namespace fatoulab::cover {

enum class DomainKind { Annulus, PuncturedDisk, Disk };

/// Explicit universal covering 𝔻 → model domain.
///
///   Annulus k·A(1/R, R):  π(z) = k·exp(i·c·artanh z),  c = 4 ln R / π
///   PuncturedDisk 𝔻∖{0}:  π(z) = exp(−(1 + z)/(1 − z))
///   Disk:                 π(z) = z
///
/// The annulus cover sends the strip |Im s| < π/4 (s = artanh z) onto the
/// annulus, so the deck group is generated by s ↦ s + 2π/c, i.e. the
/// hyperbolic Möbius map z ↦ (z + t)/(1 + t z), t = tanh(2π/c), fixing ±1.
class CoveringModel {
 public:
  /// Canonical self-dual annulus A(1/R, R), R > 1.
  static CoveringModel annulus(double R);
  /// General round annulus A(r_in, r_out), stored as k·A(1/R, R) with
  /// k = √(r_in r_out), R = √(r_out / r_in).
  static CoveringModel annulus(double r_in, double r_out);
  static CoveringModel punctured_disk();
  static CoveringModel disk();

  DomainKind kind() const { return kind_; }
  double R() const { return R_; }
  double rescale() const { return rescale_; }
  /// c = 4 ln R / π (annulus only).
  double strip_scale() const { return strip_scale_; }
  double inner_radius() const;
  double outer_radius() const;

  const std::vector<Complex>& limit_set() const { return limit_set_; }
  const zoo::Mobius& deck_generator() const { return deck_; }

  /// Number of boundary circles carrying harmonic measure (the puncture of
  /// the punctured disk is polar and carries none).
  int boundary_circles() const;

  struct BoundaryDistance {
    double distance;
    int component;  // annulus: 0 inner, 1 outer; disks: 0 unit circle, 1 puncture
  };
  BoundaryDistance boundary_distance(Complex w) const;

  std::string describe() const;

 private:
  CoveringModel() = default;

  DomainKind kind_ = DomainKind::Disk;
  double R_ = 1.0;
  double rescale_ = 1.0;
  double strip_scale_ = 0.0;
  std::vector<Complex> limit_set_;
  zoo::Mobius deck_;
};

/// artanh on 𝔻, principal branch (cut outside the disk).
Complex disk_artanh(Complex z);

Complex cover_eval(const CoveringModel& model, Complex z);
Complex deck_apply(const CoveringModel& model, Complex z);

/// A disk point over w (annulus: principal branch, |Re artanh| < π/c).
Complex cover_preimage(const CoveringModel& model, Complex w);

/// Disk-level inner function g with π_dst ∘ g = f ∘ π_src, returned as a
/// Möbius MapSpec. Supported: Rotation(θ) on an annulus (src = dst) gives the
/// hyperbolic map s ↦ s + θ/c; PowerMap(d) from k·A(1/R, R) to k^d·A(1/R^d, R^d)
/// gives the identity.
zoo::MapSpec lift_map(const CoveringModel& src, const CoveringModel& dst,
                      const zoo::MapSpec& map);

enum class MobiusType { Identity, Elliptic, Parabolic, Hyperbolic };

struct MobiusClassification {
  MobiusType type;
  std::vector<Complex> boundary_fixed_points;  // fixed points on ∂𝔻
  std::vector<Complex> multipliers;            // derivative at each of them
  double translation_length;                   // hyperbolic metric, 0 unless hyperbolic
};

/// Classification of a disk automorphism by trace²/det.
MobiusClassification classify_mobius(const zoo::Mobius& m, double tol = 1e-12);

// Radial classification ------------------------------------------------------

enum class RadialVerdict { Escaping, Bounded, Bungee, Undetermined };
const char* to_string(RadialVerdict v);

struct RadialConfig {
  int samples = 52;            // K, radii t_k = 1 − 2^{−k}, k = 1..K
  double eps_escape = 1e-6;
  double delta_bounded = 1e-3;
  int bungee_crossings = 3;
  double noise_floor = 0.0;    // allowed increase in the escaping tail
};

struct RadialClass {
  RadialVerdict verdict;
  double min_boundary_distance;
  double last_boundary_distance;
  int samples_used;
  double eps_escape;
  double delta_bounded;
  int tail_crossings;
  std::vector<double> distances;  // d_k, k = 1..K
};

/// Verdict from a distance trail alone. The tail is k ≥ K/2.
RadialClass classify_distances(std::span<const double> distances, const RadialConfig& cfg);

/// Tracks d_k = dist(π(t_k ξ), ∂domain) along the radius to ξ ∈ ∂𝔻.
RadialClass radial_classify(const CoveringModel& model, Complex xi, RadialConfig cfg = {});

// Harmonic measure as a push-forward -------------------------------------------

struct PushforwardResult {
  std::vector<ArcHistogram> hists;      // one per boundary circle
  std::vector<double> component_masses;
  std::uint64_t n_samples;
  std::uint64_t seed;
  Complex base;                         // π(base_disk_point)
};

/// Samples ξ from harmonic measure of 𝔻 at `base_disk_point` (uniform when it
/// is 0), maps through the closed-form radial limit π*(ξ), and bins by angle.
PushforwardResult pushforward_measure(const CoveringModel& model, std::uint64_t n_samples,
                                      std::size_t n_bins, std::uint64_t seed,
                                      Complex base_disk_point = 0.0);

/// Radial limit π*(ξ) for |ξ| = 1 off the limit set, with its component.
struct RadialLimit {
  Complex point;
  int component;
};
RadialLimit radial_limit(const CoveringModel& model, Complex xi);

nlohmann::json to_json(const CoveringModel& model);
CoveringModel model_from_json(const nlohmann::json& j);

}  // namespace fatoulab::cover
