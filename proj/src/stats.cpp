#include "fatoulab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "fatoulab/errors.hpp"

namespace fatoulab::stats {

double ks_uniform(std::vector<double> u) {
  if (u.empty()) throw Error(ErrorKind::EmptyInput, "ks_uniform: no samples");
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, hi - u[i], u[i] - lo});
  }
  return d;
}

double ks_critical_1pct(std::size_t n) {
  return 1.63 / std::sqrt(static_cast<double>(n));
}

double chi_square(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size()) {
    throw Error(ErrorKind::InvalidArgument, "chi_square: size mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    s += d * d / expected[i];
  }
  return s;
}

double chi_square_critical_001(int dof) {
  // z for upper tail 0.001
  constexpr double z = 3.090232306167813;
  const double k = static_cast<double>(dof);
  const double c = 2.0 / (9.0 * k);
  const double t = 1.0 - c + z * std::sqrt(c);
  return k * t * t * t;
}

}  // namespace fatoulab::stats
