#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fatoulab {

/// Empirical measure on one boundary circle: counts over n_bins equal arcs,
/// bin k covering angles [2πk/n, 2π(k+1)/n) measured from the component's
/// center.
struct ArcHistogram {
  int component_id = 0;
  std::vector<std::uint64_t> counts;

  ArcHistogram() = default;
  ArcHistogram(int id, std::size_t n_bins) : component_id(id), counts(n_bins, 0) {}

  std::size_t n_bins() const { return counts.size(); }
  std::uint64_t total() const;
  double bin_start_angle(std::size_t bin) const;
  std::size_t bin_of(double angle) const;
  void add_angle(double angle) { ++counts[bin_of(angle)]; }
  void merge(const ArcHistogram& other);
};

/// CSV with header `component_id,bin_index,bin_start_angle_rad,count`, one row
/// per bin, components in the given order. Numbers use 17 significant digits.
void write_histogram_csv(std::ostream& out, std::span<const ArcHistogram> hists);
std::string histogram_csv(std::span<const ArcHistogram> hists);

/// Mass in each (component, bin) cell, normalized by `denominator`.
std::vector<double> cell_masses(std::span<const ArcHistogram> hists,
                                double denominator);

/// Total-variation distance ½Σ|p−q| between two cell-mass vectors of equal
/// length.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace fatoulab
