#include "fatoulab/arc_histogram.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "fatoulab/core.hpp"
#include "fatoulab/errors.hpp"

namespace fatoulab {

std::uint64_t ArcHistogram::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

double ArcHistogram::bin_start_angle(std::size_t bin) const {
  return kTwoPi * static_cast<double>(bin) / static_cast<double>(counts.size());
}

std::size_t ArcHistogram::bin_of(double angle) const {
  const double a = wrap_angle(angle);
  const auto n = counts.size();
  auto bin = static_cast<std::size_t>(a / kTwoPi * static_cast<double>(n));
  return std::min(bin, n - 1);
}

void ArcHistogram::merge(const ArcHistogram& other) {
  if (other.counts.size() != counts.size()) {
    throw Error(ErrorKind::InvalidArgument, "histogram bin counts differ");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

void write_histogram_csv(std::ostream& out, std::span<const ArcHistogram> hists) {
  out << "component_id,bin_index,bin_start_angle_rad,count\n";
  for (const auto& h : hists) {
    for (std::size_t b = 0; b < h.n_bins(); ++b) {
      out << fmt::format("{},{},{:.17g},{}\n", h.component_id, b,
                         h.bin_start_angle(b), h.counts[b]);
    }
  }
}

std::string histogram_csv(std::span<const ArcHistogram> hists) {
  std::ostringstream os;
  write_histogram_csv(os, hists);
  return os.str();
}

std::vector<double> cell_masses(std::span<const ArcHistogram> hists,
                                double denominator) {
  std::vector<double> out;
  for (const auto& h : hists) {
    for (auto c : h.counts) out.push_back(static_cast<double>(c) / denominator);
  }
  return out;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorKind::InvalidArgument, "total_variation: size mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

}  // namespace fatoulab
