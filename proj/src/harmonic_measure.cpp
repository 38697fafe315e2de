#include "fatoulab/harmonic_measure.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fatoulab/errors.hpp"
#include "fatoulab/parallel.hpp"
#include "fatoulab/rng.hpp"

namespace fatoulab::harmonic {

DomainOracle DomainOracle::annulus(double r_in, double r_out) {
  if (!(r_in > 0.0 && r_out > r_in && std::isfinite(r_out))) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("annulus needs 0 < r_in < r_out, got ({}, {})", r_in, r_out));
  }
  DomainOracle d;
  d.kind_ = DomainKind::Annulus;
  d.circles_ = {{0.0, r_in}, {0.0, r_out}};
  return d;
}

DomainOracle DomainOracle::champagne(std::vector<Bubble> bubbles) {
  if (bubbles.empty()) throw Error(ErrorKind::EmptyInput, "champagne domain needs bubbles");
  for (std::size_t i = 0; i < bubbles.size(); ++i) {
    const Bubble& b = bubbles[i];
    if (!(b.radius > 0.0) || !(std::abs(b.center) + b.radius < 1.0)) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("bubble {} is not a disk strictly inside the unit disk", i));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!(std::abs(b.center - bubbles[j].center) > b.radius + bubbles[j].radius)) {
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("bubbles {} and {} intersect", j, i));
      }
    }
  }
  DomainOracle d;
  d.kind_ = DomainKind::ChampagneDisk;
  d.circles_.push_back({0.0, 1.0});
  d.circles_.insert(d.circles_.end(), bubbles.begin(), bubbles.end());
  return d;
}

DomainOracle DomainOracle::disk_minus_disk(Complex center, double radius) {
  DomainOracle d = champagne({{center, radius}});
  d.kind_ = DomainKind::DiskMinusDisk;
  return d;
}

double DomainOracle::diameter() const {
  return kind_ == DomainKind::Annulus ? 2.0 * circles_[1].radius : 2.0;
}

DomainOracle::Distance DomainOracle::distance(Complex z) const {
  const double r = std::abs(z);
  if (kind_ == DomainKind::Annulus) {
    const double inner = r - circles_[0].radius;
    const double outer = circles_[1].radius - r;
    return inner <= outer ? Distance{inner, 0} : Distance{outer, 1};
  }
  Distance best{1.0 - r, 0};
  for (std::size_t k = 1; k < circles_.size(); ++k) {
    const double d = std::abs(z - circles_[k].center) - circles_[k].radius;
    if (d < best.distance) best = {d, static_cast<int>(k)};
  }
  return best;
}

std::string DomainOracle::kind_name() const {
  switch (kind_) {
    case DomainKind::Annulus: return "annulus";
    case DomainKind::ChampagneDisk: return "champagne";
    case DomainKind::DiskMinusDisk: return "disk_minus_disk";
  }
  return "unknown";
}

std::vector<double> WalkResult::component_masses() const {
  std::vector<double> m;
  for (const auto& h : hits) {
    m.push_back(walks == 0 ? 0.0 : static_cast<double>(h.total()) / static_cast<double>(walks));
  }
  return m;
}

namespace {

struct WalkTally {
  std::vector<ArcHistogram> hits;
  std::uint64_t stalled = 0;
  std::uint64_t steps = 0;
};

}  // namespace

WalkResult walk_on_spheres(const DomainOracle& domain, Complex base, std::uint64_t walks,
                           std::uint64_t seed, const WalkConfig& cfg) {
  if (walks < 1) throw Error(ErrorKind::EmptyInput, "walk_on_spheres needs at least one walk");
  if (cfg.n_bins < 1) throw Error(ErrorKind::InvalidArgument, "walk_on_spheres needs n_bins >= 1");
  if (cfg.step_cap < 1) throw Error(ErrorKind::InvalidArgument, "walk_on_spheres needs step_cap >= 1");
  const double eps = cfg.epsilon_shell > 0.0 ? cfg.epsilon_shell : 1e-6 * domain.diameter();
  const auto start = domain.distance(base);
  if (!(start.distance > eps)) {
    throw Error(ErrorKind::BasePointOnBoundary,
                fmt::format("base ({}, {}) is not strictly inside the domain (distance {}, shell {})",
                            base.real(), base.imag(), start.distance, eps));
  }
  const int components = domain.component_count();

  WalkTally tally = parallel_reduce<WalkTally>(
      walks,
      [&] {
        WalkTally t;
        for (int k = 0; k < components; ++k) t.hits.emplace_back(k, cfg.n_bins);
        return t;
      },
      [&](WalkTally& t, std::size_t i) {
        CounterStream rng(seed, i);
        Complex z = base;
        for (std::uint64_t step = 0;; ++step) {
          const auto d = domain.distance(z);
          if (d.distance < eps) {
            t.hits[d.component].add_angle(angle_of(z - domain.circle(d.component).center));
            t.steps += step;
            return;
          }
          if (step == cfg.step_cap) {
            ++t.stalled;
            t.steps += step;
            return;
          }
          z += std::polar(d.distance, rng.angle());
        }
      },
      [](WalkTally& a, const WalkTally& b) {
        for (std::size_t k = 0; k < a.hits.size(); ++k) a.hits[k].merge(b.hits[k]);
        a.stalled += b.stalled;
        a.steps += b.steps;
      });

  WalkResult r;
  r.hits = std::move(tally.hits);
  r.walks = walks;
  r.stalled = tally.stalled;
  r.seed = seed;
  r.epsilon_shell = eps;
  r.total_steps = tally.steps;
  const double stall_fraction = static_cast<double>(r.stalled) / static_cast<double>(walks);
  if (stall_fraction >= cfg.max_stall_fraction) {
    throw Error(ErrorKind::StallRateExceeded,
                fmt::format("{} of {} walks hit the step cap {}", r.stalled, walks, cfg.step_cap));
  }
  return r;
}

SupportReport support_test(const WalkResult& result, double min_bin_mass) {
  SupportReport rep{true, min_bin_mass, std::numeric_limits<double>::infinity(), {}};
  const double w = static_cast<double>(result.walks);
  for (const auto& h : result.hits) {
    for (std::size_t b = 0; b < h.n_bins(); ++b) {
      const double mass = static_cast<double>(h.counts[b]) / w;
      rep.smallest_observed = std::min(rep.smallest_observed, mass);
      if (!(mass > min_bin_mass)) {
        rep.pass = false;
        rep.deficient.push_back({h.component_id, b, mass});
      }
    }
  }
  return rep;
}

CrossValidation cross_validate(const DomainOracle& annulus, const cover::CoveringModel& model,
                               std::uint64_t walks, std::uint64_t seed, std::size_t n_bins,
                               double c) {
  if (annulus.kind() != DomainKind::Annulus || model.kind() != cover::DomainKind::Annulus) {
    throw Error(ErrorKind::DomainMismatch, "cross_validate needs an annulus oracle and an annulus model");
  }
  const double rin = annulus.circle(0).radius;
  const double rout = annulus.circle(1).radius;
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); };
  if (!close(rin, model.inner_radius()) || !close(rout, model.outer_radius())) {
    throw Error(ErrorKind::DomainMismatch,
                fmt::format("oracle A({}, {}) differs from covering model A({}, {})", rin, rout,
                            model.inner_radius(), model.outer_radius()));
  }
  const Complex base = cover::cover_eval(model, 0.0);
  const std::uint64_t pf_seed = seed ^ 0x9E3779B97F4A7C15ULL;
  WalkConfig cfg;
  cfg.n_bins = n_bins;
  WalkResult wos = walk_on_spheres(annulus, base, walks, seed, cfg);
  cover::PushforwardResult pf = cover::pushforward_measure(model, walks, n_bins, pf_seed);
  const auto p = cell_masses(wos.hits, static_cast<double>(wos.walks));
  const auto q = cell_masses(pf.hists, static_cast<double>(pf.n_samples));
  const double tv = total_variation(p, q);
  const double threshold = c / std::sqrt(static_cast<double>(walks));
  return {tv, threshold, tv < threshold, seed, pf_seed, base, std::move(wos), std::move(pf)};
}

double annulus_outer_mass(double r_in, double r_out, double rho) {
  if (!(r_in > 0.0 && r_out > r_in)) {
    throw Error(ErrorKind::InvalidArgument, "annulus_outer_mass needs 0 < r_in < r_out");
  }
  if (!(rho > r_in && rho < r_out)) {
    throw Error(ErrorKind::BasePointOnBoundary, "annulus_outer_mass needs r_in < rho < r_out");
  }
  return std::log(rho / r_in) / std::log(r_out / r_in);
}

namespace {

// c_n = (x^n − x^{−n}) / (L^n − L^{−n}) for 1 < x < L, computed as
// (x/L)^n (1 − x^{−2n}) / (1 − L^{−2n}) to stay finite for large n.
std::vector<double> fourier_weights(double x, double L) {
  std::vector<double> c;
  for (int n = 1; n < 100000; ++n) {
    const double dn = static_cast<double>(n);
    const double lead = std::pow(x / L, dn);
    const double v = lead * -std::expm1(-2.0 * dn * std::log(x)) / -std::expm1(-2.0 * dn * std::log(L));
    c.push_back(v);
    if (lead < 1e-18) break;
  }
  return c;
}

void add_circle_masses(std::vector<double>& out, double p, const std::vector<double>& c,
                       double phi, std::size_t n_bins) {
  const double width = kTwoPi / static_cast<double>(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    const double a0 = width * static_cast<double>(b) - phi;
    const double a1 = width * static_cast<double>(b + 1) - phi;
    double s = 0.0;
    // sum small terms first
    for (std::size_t k = c.size(); k-- > 0;) {
      const double n = static_cast<double>(k + 1);
      s += c[k] * (std::sin(n * a1) - std::sin(n * a0)) / n;
    }
    out.push_back((p * width + 2.0 * s) / kTwoPi);
  }
}

}  // namespace

std::vector<double> annulus_arc_masses(double r_in, double r_out, Complex z0, std::size_t n_bins) {
  if (n_bins < 1) throw Error(ErrorKind::InvalidArgument, "annulus_arc_masses needs n_bins >= 1");
  const double rho = std::abs(z0);
  const double p_out = annulus_outer_mass(r_in, r_out, rho);
  const double L = r_out / r_in;
  const double phi = std::arg(z0);
  std::vector<double> out;
  out.reserve(2 * n_bins);
  add_circle_masses(out, 1.0 - p_out, fourier_weights(r_out / rho, L), phi, n_bins);
  add_circle_masses(out, p_out, fourier_weights(rho / r_in, L), phi, n_bins);
  return out;
}

nlohmann::json summary_json(const WalkResult& r) {
  return {{"walks", r.walks},
          {"stalled", r.stalled},
          {"seed", r.seed},
          {"epsilon_shell", r.epsilon_shell},
          {"component_masses", r.component_masses()}};
}

}  // namespace fatoulab::harmonic
