#include "fatoulab/covering_models.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include "fatoulab/errors.hpp"
#include "fatoulab/parallel.hpp"
#include "fatoulab/rng.hpp"

namespace fatoulab::cover {

namespace {

void require_in_disk(Complex z, const char* op) {
  if (!(std::abs(z) < 1.0)) {
    throw Error(ErrorKind::OutsideDisk,
                fmt::format("{}: |z| = {} is not inside the unit disk", op, std::abs(z)));
  }
}

// Parabolic generator of the punctured-disk deck group: conjugate of
// h ↦ h + 2π by the Cayley map h = i(1 + z)/(1 − z).
zoo::Mobius punctured_disk_deck() {
  const Complex I{0.0, 1.0};
  const zoo::Mobius to_disk{1.0, -I, 1.0, I};       // h ↦ (h − i)/(h + i)
  const zoo::Mobius to_half_plane{I, I, -1.0, 1.0};  // z ↦ i(1 + z)/(1 − z)
  const zoo::Mobius shift{1.0, kTwoPi, 0.0, 1.0};
  zoo::Mobius m = to_disk.compose(shift).compose(to_half_plane);
  // normalize to det 1
  const Complex s = std::sqrt(m.det());
  return {m.a / s, m.b / s, m.c / s, m.d / s};
}

bool same_radius(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

}  // namespace

// ---------------------------------------------------------------------------

CoveringModel CoveringModel::annulus(double R) {
  if (!(R > 1.0) || !std::isfinite(R)) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("annulus needs R > 1, got {}", R));
  }
  CoveringModel m;
  m.kind_ = DomainKind::Annulus;
  m.R_ = R;
  m.rescale_ = 1.0;
  m.strip_scale_ = 4.0 * std::log(R) / kPi;
  m.limit_set_ = {Complex{1.0}, Complex{-1.0}};
  const double t = std::tanh(kTwoPi / m.strip_scale_);
  m.deck_ = zoo::Mobius{1.0, t, t, 1.0};
  return m;
}

CoveringModel CoveringModel::annulus(double r_in, double r_out) {
  if (!(r_in > 0.0) || !(r_out > r_in) || !std::isfinite(r_out)) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("annulus needs 0 < r_in < r_out, got ({}, {})", r_in, r_out));
  }
  CoveringModel m = annulus(std::sqrt(r_out / r_in));
  m.rescale_ = std::sqrt(r_in * r_out);
  return m;
}

CoveringModel CoveringModel::punctured_disk() {
  CoveringModel m;
  m.kind_ = DomainKind::PuncturedDisk;
  m.limit_set_ = {Complex{1.0}};
  m.deck_ = punctured_disk_deck();
  return m;
}

CoveringModel CoveringModel::disk() {
  CoveringModel m;
  m.kind_ = DomainKind::Disk;
  m.deck_ = zoo::Mobius::identity();
  return m;
}

double CoveringModel::inner_radius() const {
  switch (kind_) {
    case DomainKind::Annulus: return rescale_ / R_;
    case DomainKind::PuncturedDisk: return 0.0;
    case DomainKind::Disk: return 0.0;
  }
  return 0.0;
}

double CoveringModel::outer_radius() const {
  return kind_ == DomainKind::Annulus ? rescale_ * R_ : 1.0;
}

int CoveringModel::boundary_circles() const { return kind_ == DomainKind::Annulus ? 2 : 1; }

CoveringModel::BoundaryDistance CoveringModel::boundary_distance(Complex w) const {
  const double r = std::abs(w);
  switch (kind_) {
    case DomainKind::Annulus: {
      const double to_inner = r - inner_radius();
      const double to_outer = outer_radius() - r;
      return to_inner <= to_outer ? BoundaryDistance{to_inner, 0} : BoundaryDistance{to_outer, 1};
    }
    case DomainKind::PuncturedDisk:
      return 1.0 - r <= r ? BoundaryDistance{1.0 - r, 0} : BoundaryDistance{r, 1};
    case DomainKind::Disk:
      return {1.0 - r, 0};
  }
  return {0.0, 0};
}

std::string CoveringModel::describe() const {
  switch (kind_) {
    case DomainKind::Annulus:
      return fmt::format("annulus A({:.17g}, {:.17g})", inner_radius(), outer_radius());
    case DomainKind::PuncturedDisk: return "punctured disk";
    case DomainKind::Disk: return "disk";
  }
  return "?";
}

// ---------------------------------------------------------------------------

Complex disk_artanh(Complex z) { return 0.5 * (std::log(1.0 + z) - std::log(1.0 - z)); }

Complex cover_eval(const CoveringModel& model, Complex z) {
  require_in_disk(z, "cover_eval");
  switch (model.kind()) {
    case DomainKind::Annulus:
      return model.rescale() * std::exp(Complex{0.0, model.strip_scale()} * disk_artanh(z));
    case DomainKind::PuncturedDisk:
      return std::exp(-(1.0 + z) / (1.0 - z));
    case DomainKind::Disk:
      return z;
  }
  return z;
}

Complex deck_apply(const CoveringModel& model, Complex z) {
  require_in_disk(z, "deck_apply");
  return model.deck_generator().apply(z);
}

Complex cover_preimage(const CoveringModel& model, Complex w) {
  switch (model.kind()) {
    case DomainKind::Annulus: {
      const double r = std::abs(w);
      if (!(r > model.inner_radius() && r < model.outer_radius())) {
        throw Error(ErrorKind::InvalidArgument, "cover_preimage: point outside the annulus");
      }
      const Complex s = Complex{0.0, -1.0} * std::log(w / model.rescale()) / model.strip_scale();
      return std::tanh(s);
    }
    case DomainKind::PuncturedDisk: {
      const double r = std::abs(w);
      if (!(r > 0.0 && r < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "cover_preimage: point outside the punctured disk");
      }
      // exp(i h) = w with h in the upper half plane, then Cayley back to 𝔻
      const Complex h = Complex{0.0, -1.0} * std::log(w);
      return (h - Complex{0.0, 1.0}) / (h + Complex{0.0, 1.0});
    }
    case DomainKind::Disk:
      require_in_disk(w, "cover_preimage");
      return w;
  }
  return w;
}

zoo::MapSpec lift_map(const CoveringModel& src, const CoveringModel& dst, const zoo::MapSpec& map) {
  if (src.kind() == DomainKind::Annulus && dst.kind() == DomainKind::Annulus) {
    if (const auto* rot = std::get_if<zoo::Rotation>(&map.kind())) {
      if (same_radius(src.R(), dst.R()) && same_radius(src.rescale(), dst.rescale())) {
        const double t = std::tanh(rot->theta / src.strip_scale());
        return zoo::MapSpec::mobius(1.0, t, t, 1.0);
      }
    }
    if (const auto* pw = std::get_if<zoo::PowerMap>(&map.kind())) {
      const double d = pw->degree;
      if (same_radius(std::pow(src.R(), d), dst.R()) &&
          same_radius(std::pow(src.rescale(), d), dst.rescale())) {
        return zoo::MapSpec::mobius(zoo::Mobius::identity());
      }
    }
  }
  throw Error(ErrorKind::Unsupported,
              fmt::format("lift_map: no closed-form lift of {} from {} to {}", map.kind_name(),
                          src.describe(), dst.describe()));
}

MobiusClassification classify_mobius(const zoo::Mobius& m, double tol) {
  MobiusClassification out{MobiusType::Identity, {}, {}, 0.0};
  if (m.is_identity(tol)) return out;
  const Complex tr = m.a + m.d;
  const double tau = std::real(tr * tr / m.det());
  if (tau > 4.0 + tol) {
    out.type = MobiusType::Hyperbolic;
    const double half = std::sqrt(tau) / 2.0;
    out.translation_length = 2.0 * std::acosh(half);
  } else if (tau < 4.0 - tol) {
    out.type = MobiusType::Elliptic;
  } else {
    out.type = MobiusType::Parabolic;
  }
  for (Complex p : m.fixed_points()) {
    if (std::abs(std::abs(p) - 1.0) <= 1e-9) {
      out.boundary_fixed_points.push_back(p);
      out.multipliers.push_back(m.derivative(p));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Radial classification

const char* to_string(RadialVerdict v) {
  switch (v) {
    case RadialVerdict::Escaping: return "escaping";
    case RadialVerdict::Bounded: return "bounded";
    case RadialVerdict::Bungee: return "bungee";
    case RadialVerdict::Undetermined: return "undetermined";
  }
  return "?";
}

RadialClass classify_distances(std::span<const double> d, const RadialConfig& cfg) {
  if (d.empty()) throw Error(ErrorKind::EmptyInput, "classify_distances: empty trail");
  RadialClass out{};
  out.distances.assign(d.begin(), d.end());
  out.samples_used = static_cast<int>(d.size());
  out.eps_escape = cfg.eps_escape;
  out.delta_bounded = cfg.delta_bounded;
  out.min_boundary_distance = *std::min_element(d.begin(), d.end());
  out.last_boundary_distance = d.back();

  // k ≥ K/2 in 1-based numbering
  const std::size_t K = d.size();
  const std::size_t tail_begin = K / 2 == 0 ? 0 : K / 2 - 1;
  const auto tail = d.subspan(tail_begin);

  bool all_small = true;
  bool non_increasing = true;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (!(tail[i] < cfg.eps_escape)) all_small = false;
    if (i > 0 && tail[i] > tail[i - 1] + cfg.noise_floor) non_increasing = false;
  }

  int crossings = 0;
  int state = 0;  // −1 below eps, +1 above delta
  for (double v : tail) {
    const int s = v < cfg.eps_escape ? -1 : (v > cfg.delta_bounded ? 1 : 0);
    if (s == 0) continue;
    if (state != 0 && s != state) ++crossings;
    state = s;
  }
  out.tail_crossings = crossings;

  if (all_small && non_increasing) {
    out.verdict = RadialVerdict::Escaping;
  } else if (out.min_boundary_distance > cfg.delta_bounded) {
    out.verdict = RadialVerdict::Bounded;
  } else if (crossings >= cfg.bungee_crossings) {
    out.verdict = RadialVerdict::Bungee;
  } else {
    out.verdict = RadialVerdict::Undetermined;
  }
  return out;
}

RadialClass radial_classify(const CoveringModel& model, Complex xi, RadialConfig cfg) {
  if (std::abs(std::abs(xi) - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "radial_classify: xi must lie on the unit circle");
  }
  if (cfg.samples < 2 || cfg.samples > 53) {
    throw Error(ErrorKind::InvalidArgument,
                "radial_classify: dyadic schedule needs 2 <= K <= 53 in double precision");
  }
  xi /= std::abs(xi);
  if (cfg.noise_floor == 0.0) cfg.noise_floor = 8.0 * DBL_EPSILON * model.outer_radius();
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(cfg.samples));
  for (int k = 1; k <= cfg.samples; ++k) {
    const double t = 1.0 - std::ldexp(1.0, -k);
    d.push_back(model.boundary_distance(cover_eval(model, t * xi)).distance);
  }
  return classify_distances(d, cfg);
}

// ---------------------------------------------------------------------------
// Push-forward of Lebesgue measure

RadialLimit radial_limit(const CoveringModel& model, Complex xi) {
  const double phi = std::arg(xi);
  switch (model.kind()) {
    case DomainKind::Annulus: {
      if (std::sin(phi) == 0.0) {
        throw Error(ErrorKind::InvalidArgument, "radial_limit: xi lies in the limit set {±1}");
      }
      // artanh(e^{iφ}) = ½ ln|cot(φ/2)| ± iπ/4
      const double re_s = 0.5 * std::log(std::abs(std::cos(phi / 2.0) / std::sin(phi / 2.0)));
      const bool upper = std::sin(phi) > 0.0;
      const double modulus = upper ? model.inner_radius() : model.outer_radius();
      return {std::polar(modulus, model.strip_scale() * re_s), upper ? 0 : 1};
    }
    case DomainKind::PuncturedDisk: {
      if (phi == 0.0) throw Error(ErrorKind::InvalidArgument, "radial_limit: xi = 1 is the limit set");
      const double cot = std::cos(phi / 2.0) / std::sin(phi / 2.0);
      return {std::polar(1.0, -cot), 0};
    }
    case DomainKind::Disk:
      return {xi / std::abs(xi), 0};
  }
  return {xi, 0};
}

PushforwardResult pushforward_measure(const CoveringModel& model, std::uint64_t n_samples,
                                      std::size_t n_bins, std::uint64_t seed,
                                      Complex base_disk_point) {
  if (n_samples < 1 || n_bins < 1) {
    throw Error(ErrorKind::InvalidArgument, "pushforward_measure: need n_samples >= 1 and n_bins >= 1");
  }
  require_in_disk(base_disk_point, "pushforward_measure");
  const int n_comp = model.boundary_circles();
  const Complex z0 = base_disk_point;

  using Local = std::vector<ArcHistogram>;
  auto make = [&] {
    Local h;
    for (int c = 0; c < n_comp; ++c) h.emplace_back(c, n_bins);
    return h;
  };
  Local hists = parallel_reduce<Local>(
      n_samples, make,
      [&](Local& h, std::size_t i) {
        CounterStream rng(seed, i);
        for (;;) {
          const Complex eta = std::polar(1.0, rng.angle());
          // automorphism sending 0 to z0 carries Lebesgue measure to harmonic measure at z0
          const Complex xi = (eta + z0) / (1.0 + std::conj(z0) * eta);
          const double phi = std::arg(xi);
          const bool on_limit_set =
              (model.kind() == DomainKind::Annulus && std::sin(phi) == 0.0) ||
              (model.kind() == DomainKind::PuncturedDisk && phi == 0.0);
          if (on_limit_set) continue;  // probability zero; redraw from the same stream
          const RadialLimit lim = radial_limit(model, xi);
          h[lim.component].add_angle(std::arg(lim.point));
          return;
        }
      },
      [](Local& a, const Local& b) {
        for (std::size_t c = 0; c < a.size(); ++c) a[c].merge(b[c]);
      });

  PushforwardResult out;
  out.n_samples = n_samples;
  out.seed = seed;
  out.base = cover_eval(model, z0);
  for (const auto& h : hists) {
    out.component_masses.push_back(static_cast<double>(h.total()) / static_cast<double>(n_samples));
  }
  out.hists = std::move(hists);
  return out;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const CoveringModel& model) {
  switch (model.kind()) {
    case DomainKind::Annulus:
      if (model.rescale() == 1.0) return {{"domain", "annulus"}, {"R", model.R()}};
      return {{"domain", "annulus"}, {"r_in", model.inner_radius()}, {"r_out", model.outer_radius()}};
    case DomainKind::PuncturedDisk: return {{"domain", "punctured_disk"}};
    case DomainKind::Disk: return {{"domain", "disk"}};
  }
  return {};
}

CoveringModel model_from_json(const nlohmann::json& j) {
  try {
    const std::string domain = j.at("domain").get<std::string>();
    if (domain == "annulus") {
      if (j.contains("R")) return CoveringModel::annulus(j.at("R").get<double>());
      return CoveringModel::annulus(j.at("r_in").get<double>(), j.at("r_out").get<double>());
    }
    if (domain == "punctured_disk") return CoveringModel::punctured_disk();
    if (domain == "disk") return CoveringModel::disk();
    throw Error(ErrorKind::InvalidArgument, fmt::format("unknown covering domain '{}'", domain));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("malformed covering model JSON: {}", e.what()));
  }
}

}  // namespace fatoulab::cover
