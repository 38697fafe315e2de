#pragma once

#include <span>
#include <vector>

namespace fatoulab::stats {

/// Kolmogorov–Smirnov distance between the empirical law of `u` (values in
/// [0, 1)) and the uniform law. Sorts a copy.
double ks_uniform(std::vector<double> u);

/// Asymptotic 1% critical value 1.63/√n.
double ks_critical_1pct(std::size_t n);

/// Pearson chi-square statistic of observed counts against expected counts.
double chi_square(std::span<const double> observed, std::span<const double> expected);

/// Upper 0.1% point of chi-square with `dof` degrees of freedom
/// (Wilson–Hilferty approximation).
double chi_square_critical_001(int dof);

}  // namespace fatoulab::stats
