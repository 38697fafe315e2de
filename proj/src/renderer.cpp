#include "fatoulab/renderer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>

#include "fatoulab/errors.hpp"
#include "fatoulab/parallel.hpp"

namespace fatoulab::render {

void GridSpec::validate() const {
  if (nx < 1 || ny < 1) throw Error(ErrorKind::InvalidArgument, "grid needs nx, ny >= 1");
  if (!(width > 0.0 && height > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "grid needs positive width and height");
  }
  if (max_iter < 1) throw Error(ErrorKind::InvalidArgument, "grid needs max_iter >= 1");
  if (!(tolerance > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid needs a positive tolerance");
  if (!(escape_radius > 1.0)) throw Error(ErrorKind::InvalidArgument, "grid needs escape_radius > 1");
}

Complex GridSpec::pixel_center(int i, int j) const {
  const double x = center.real() + static_cast<double>(2 * i + 1 - nx) / (2.0 * nx) * width;
  const double y = center.imag() - static_cast<double>(2 * j + 1 - ny) / (2.0 * ny) * height;
  return {x, y};
}

std::optional<std::pair<int, int>> GridSpec::pixel_of(Complex z) const {
  const double u = (z.real() - center.real()) / width + 0.5;
  const double v = 0.5 - (z.imag() - center.imag()) / height;
  if (!(u >= 0.0 && u < 1.0 && v >= 0.0 && v < 1.0)) return std::nullopt;
  const int i = std::min(nx - 1, static_cast<int>(u * nx));
  const int j = std::min(ny - 1, static_cast<int>(v * ny));
  return std::pair{i, j};
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Attracted: return "attracted";
    case Verdict::EscapedToZero: return "escaped_to_zero";
    case Verdict::EscapedToInfinity: return "escaped_to_infinity";
    case Verdict::Singular: return "singular";
    case Verdict::Undecided: return "undecided";
  }
  return "unknown";
}

std::optional<Complex> default_target(const zoo::MapSpec& map) {
  if (std::holds_alternative<zoo::ExpBaker>(map.kind())) return Complex{1.0, 0.0};
  if (std::holds_alternative<zoo::SineModel>(map.kind())) return Complex{0.0, 0.0};
  if (std::holds_alternative<zoo::McMullen>(map.kind())) return std::nullopt;
  throw Error(ErrorKind::Unsupported,
              fmt::format("rendering supports exp_baker, sine_model and mcmullen, not {}", map.kind_name()));
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

PointClass classify_with(const zoo::MapSpec& map, Complex z, const GridSpec& grid,
                         const std::optional<zoo::OrbitTarget>& target) {
  const auto out = zoo::orbit_outcome(map, z, static_cast<std::size_t>(grid.max_iter),
                                      grid.escape_radius, target);
  const auto steps = static_cast<std::uint32_t>(out.steps);
  const Verdict v = std::visit(
      Overloaded{[](const zoo::terminal::Completed&) { return Verdict::Undecided; },
                 [](const zoo::terminal::Converged&) { return Verdict::Attracted; },
                 [](const zoo::terminal::HitSingularity&) { return Verdict::Singular; },
                 [](const zoo::terminal::Escaped& e) {
                   return e.end == zoo::EscapeEnd::Zero ? Verdict::EscapedToZero
                                                        : Verdict::EscapedToInfinity;
                 }},
      out.terminal);
  return {v, steps};
}

std::optional<zoo::OrbitTarget> target_for(const zoo::MapSpec& map, const GridSpec& grid) {
  const auto def = default_target(map);  // also rejects unsupported kinds
  const auto t = grid.target ? grid.target : def;
  if (!t) return std::nullopt;
  return zoo::OrbitTarget{*t, grid.tolerance};
}

}  // namespace

PointClass classify_point(const zoo::MapSpec& map, Complex z, const GridSpec& grid) {
  grid.validate();
  return classify_with(map, z, grid, target_for(map, grid));
}

ClassifiedGrid classify_grid(const zoo::MapSpec& map, const GridSpec& grid) {
  grid.validate();
  const auto target = target_for(map, grid);
  ClassifiedGrid out;
  out.spec = grid;
  const std::size_t n = static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny);
  out.verdict.assign(n, Verdict::Undecided);
  out.steps.assign(n, 0);
  parallel_for(static_cast<std::size_t>(grid.ny), [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < grid.nx; ++i) {
      const PointClass c = classify_with(map, grid.pixel_center(i, j), grid, target);
      const std::size_t k = row * static_cast<std::size_t>(grid.nx) + static_cast<std::size_t>(i);
      out.verdict[k] = c.verdict;
      out.steps[k] = c.steps;
    }
  });
  return out;
}

namespace {

using Rgb = std::array<int, 3>;

Rgb palette(Verdict v) {
  switch (v) {
    case Verdict::Attracted: return {60, 120, 230};
    case Verdict::EscapedToZero: return {240, 150, 40};
    case Verdict::EscapedToInfinity: return {250, 235, 140};
    case Verdict::Singular: return {220, 30, 40};
    case Verdict::Undecided: return {0, 0, 0};
  }
  return {255, 0, 255};
}

}  // namespace

std::vector<std::uint8_t> encode_ppm(const ClassifiedGrid& grid) {
  const std::string header = fmt::format("P6\n{} {}\n255\n", grid.spec.nx, grid.spec.ny);
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(header.size() + 3 * grid.verdict.size());
  for (std::size_t k = 0; k < grid.verdict.size(); ++k) {
    const Rgb base = palette(grid.verdict[k]);
    // integer shading keeps the bytes platform independent
    const int shade = 1000 - 6 * static_cast<int>(std::min<std::uint32_t>(grid.steps[k], 100));
    for (int c : base) bytes.push_back(static_cast<std::uint8_t>(c * shade / 1000));
  }
  return bytes;
}

void write_image(const ClassifiedGrid& grid, const std::string& path) {
  const auto bytes = encode_ppm(grid);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw Error(ErrorKind::Io, fmt::format("cannot open '{}' for writing: {}", path, std::strerror(errno)));
  }
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  f.close();
  if (!f) throw Error(ErrorKind::Io, fmt::format("failed writing '{}'", path));
}

nlohmann::json LoopCertificate::to_json() const {
  return {{"inside_nonbasin", inside_nonbasin},
          {"outside_nonbasin", outside_nonbasin},
          {"loop_pixels", loop_pixels},
          {"verdict", verdict}};
}

LoopCertificate loop_probe(const ClassifiedGrid& grid, Complex center, double radius) {
  const GridSpec& g = grid.spec;
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "loop radius must be positive");
  const double hx = 0.5 * g.width / g.nx;
  const double hy = 0.5 * g.height / g.ny;
  LoopCertificate cert{0, 0, 0, false};
  std::vector<std::pair<int, int>> bad;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Complex p = g.pixel_center(i, j) - center;
      // nearest and farthest points of the pixel square from the circle center
      const double nx_ = std::max(0.0, std::abs(p.real()) - hx);
      const double ny_ = std::max(0.0, std::abs(p.imag()) - hy);
      const double fx = std::abs(p.real()) + hx;
      const double fy = std::abs(p.imag()) + hy;
      const double near = std::hypot(nx_, ny_);
      const double far = std::hypot(fx, fy);
      const bool attracted = grid.at(i, j) == Verdict::Attracted;
      if (near <= radius && radius <= far) {
        ++cert.loop_pixels;
        if (!attracted && bad.empty()) bad.emplace_back(i, j);
        continue;
      }
      if (attracted) continue;
      if (far < radius) {
        ++cert.inside_nonbasin;
      } else {
        ++cert.outside_nonbasin;
      }
    }
  }
  if (cert.loop_pixels == 0) {
    throw Error(ErrorKind::InvalidArgument, "loop does not meet the grid window");
  }
  if (!bad.empty()) {
    throw Error(ErrorKind::LoopNotInBasin,
                fmt::format("loop pixel ({}, {}) is {}, not attracted", bad[0].first, bad[0].second,
                            to_string(grid.at(bad[0].first, bad[0].second))));
  }
  cert.verdict = cert.inside_nonbasin > 0 && cert.outside_nonbasin > 0;
  return cert;
}

SymmetryReport conjugation_symmetry(const ClassifiedGrid& grid) {
  const GridSpec& g = grid.spec;
  if (g.center.imag() != 0.0) {
    throw Error(ErrorKind::InvalidArgument, "conjugation symmetry needs a window centered on the real axis");
  }
  SymmetryReport rep{0, 0, {}};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      ++rep.compared;
      if (grid.at(i, j) != grid.at(i, g.ny - 1 - j)) {
        ++rep.mismatched;
        if (rep.examples.size() < 8) rep.examples.emplace_back(i, j);
      }
    }
  }
  return rep;
}

namespace {

Verdict swap_ends(Verdict v) {
  if (v == Verdict::EscapedToZero) return Verdict::EscapedToInfinity;
  if (v == Verdict::EscapedToInfinity) return Verdict::EscapedToZero;
  return v;
}

}  // namespace

SymmetryReport inversion_symmetry(const zoo::MapSpec& map, const ClassifiedGrid& grid) {
  const GridSpec& g = grid.spec;
  const auto target = target_for(map, g);
  const std::size_t n = grid.verdict.size();
  // 0 = not compared, 1 = agree, 2 = mismatch
  std::vector<std::uint8_t> status(n, 0);
  parallel_for(static_cast<std::size_t>(g.ny), [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < g.nx; ++i) {
      const Complex z = g.pixel_center(i, j);
      if (z == Complex{0.0}) continue;
      const Complex w = 1.0 / z;
      if (!g.pixel_of(w)) continue;
      const PointClass c = classify_with(map, w, g, target);
      status[row * g.nx + i] = swap_ends(c.verdict) == grid.at(i, j) ? 1 : 2;
    }
  });
  SymmetryReport rep{0, 0, {}};
  for (std::size_t k = 0; k < n; ++k) {
    if (status[k] == 0) continue;
    ++rep.compared;
    if (status[k] == 2) {
      ++rep.mismatched;
      if (rep.examples.size() < 8) {
        rep.examples.emplace_back(static_cast<int>(k % g.nx), static_cast<int>(k / g.nx));
      }
    }
  }
  return rep;
}

nlohmann::json to_json(const GridSpec& g) {
  nlohmann::json j{{"center", {g.center.real(), g.center.imag()}},
                   {"width", g.width},
                   {"height", g.height},
                   {"nx", g.nx},
                   {"ny", g.ny},
                   {"max_iter", g.max_iter},
                   {"tolerance", g.tolerance},
                   {"escape_radius", g.escape_radius}};
  if (g.target) j["target"] = {g.target->real(), g.target->imag()};
  return j;
}

GridSpec grid_from_json(const nlohmann::json& j) {
  GridSpec g;
  try {
    if (j.contains("center")) g.center = {j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>()};
    if (j.contains("width")) g.width = j.at("width").get<double>();
    if (j.contains("height")) g.height = j.at("height").get<double>();
    if (j.contains("nx")) g.nx = j.at("nx").get<int>();
    if (j.contains("ny")) g.ny = j.at("ny").get<int>();
    if (j.contains("max_iter")) g.max_iter = j.at("max_iter").get<int>();
    if (j.contains("tolerance")) g.tolerance = j.at("tolerance").get<double>();
    if (j.contains("escape_radius")) g.escape_radius = j.at("escape_radius").get<double>();
    if (j.contains("target")) g.target = Complex{j.at("target").at(0).get<double>(), j.at("target").at(1).get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("bad grid config: {}", e.what()));
  }
  g.validate();
  return g;
}

}  // namespace fatoulab::render
