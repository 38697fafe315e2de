#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fatoulab/core.hpp"
#include "fatoulab/map_zoo.hpp"

namespace fatoulab::render {

/// Pixel (i, j), row j = 0 at the top, has center
///   x = cx + (2i + 1 − nx)/(2 nx) · width,  y = cy − (2j + 1 − ny)/(2 ny) · height,
/// so a window centered on 0 is exactly symmetric under z ↦ −z̄ and z ↦ z̄.
struct GridSpec {
  Complex center{0.0, 0.0};
  double width = 8.0;
  double height = 8.0;
  int nx = 1000;
  int ny = 1000;
  int max_iter = 500;
  double tolerance = 1e-6;       // attraction radius around the target
  double escape_radius = 1e10;   // its reciprocal is the 0 end for ℂ* maps
  std::optional<Complex> target; // defaults to the map's attracting fixed point

  void validate() const;
  Complex pixel_center(int i, int j) const;
  /// Pixel containing z, if inside the window.
  std::optional<std::pair<int, int>> pixel_of(Complex z) const;
};

enum class Verdict : std::uint8_t { Attracted, EscapedToZero, EscapedToInfinity, Singular, Undecided };
const char* to_string(Verdict v);

struct PointClass {
  Verdict verdict;
  std::uint32_t steps;
};

struct ClassifiedGrid {
  GridSpec spec;
  std::vector<Verdict> verdict;    // row-major, nx · ny
  std::vector<std::uint32_t> steps;

  Verdict at(int i, int j) const { return verdict[static_cast<std::size_t>(j) * spec.nx + i]; }
  std::uint32_t steps_at(int i, int j) const { return steps[static_cast<std::size_t>(j) * spec.nx + i]; }
};

/// Attracting target used for a map kind: 1 for ExpBaker, 0 for SineModel,
/// none for McMullen (its basin of ∞ shows up as escape).
std::optional<Complex> default_target(const zoo::MapSpec& map);

PointClass classify_point(const zoo::MapSpec& map, Complex z, const GridSpec& grid);

/// Rows run in parallel; each pixel depends only on its own center.
ClassifiedGrid classify_grid(const zoo::MapSpec& map, const GridSpec& grid);

/// Binary P6 image; one palette color per verdict, dimmed with the step count.
std::vector<std::uint8_t> encode_ppm(const ClassifiedGrid& grid);
void write_image(const ClassifiedGrid& grid, const std::string& path);

struct LoopCertificate {
  std::size_t loop_pixels;
  std::size_t inside_nonbasin;
  std::size_t outside_nonbasin;
  bool verdict;  // non-basin pixels on both sides

  nlohmann::json to_json() const;
};

/// The loop is the set of pixels whose square meets the circle. Inside and
/// outside are judged by pixel centers strictly off the loop.
LoopCertificate loop_probe(const ClassifiedGrid& grid, Complex center, double radius);

struct SymmetryReport {
  std::size_t compared;
  std::size_t mismatched;
  std::vector<std::pair<int, int>> examples;  // first few mismatching pixels
};

/// verdict(z) against verdict(z̄) on the mirrored pixel (window must be
/// centered on the real axis).
SymmetryReport conjugation_symmetry(const ClassifiedGrid& grid);

/// verdict(z) against the 0/∞-swapped verdict of the orbit of 1/z, for every
/// pixel center whose reciprocal lies in the window.
SymmetryReport inversion_symmetry(const zoo::MapSpec& map, const ClassifiedGrid& grid);

nlohmann::json to_json(const GridSpec& g);
GridSpec grid_from_json(const nlohmann::json& j);

}  // namespace fatoulab::render
