#include "fatoulab/blaschke_baker.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fatoulab/errors.hpp"
#include "fatoulab/map_zoo.hpp"
#include "fatoulab/parallel.hpp"
#include "fatoulab/rng.hpp"

namespace fatoulab::baker {

namespace {

// 1 − tanh²(x) = sech²(x) = 4q/(1 + q)², q = e^{−2x}
double sech2(double x) {
  const double q = std::exp(-2.0 * x);
  return 4.0 * q / ((1.0 + q) * (1.0 + q));
}

// log(1 + e) without cancellation for small e
Complex log1p_complex(Complex e) {
  const double re = 0.5 * std::log1p(2.0 * e.real() + std::norm(e));
  const double im = std::atan2(e.imag(), 1.0 + e.real());
  return {re, im};
}

constexpr double kLogTailTolerance = 1e-18;

}  // namespace

double log_multiplier_product(double s, std::size_t* terms_used) {
  if (!(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "log_multiplier_product: need s > 0");
  const double q = std::exp(-s);
  double sum = 0.0;
  std::size_t n = 0;
  for (;;) {
    ++n;
    const double delta = sech2(0.5 * static_cast<double>(n) * s);
    sum += std::log1p(-delta);
    // Σ_{m>n} −log(1 − δ_m) ≤ Σ δ_m/(1 − δ_m) ≤ 4 e^{−(n+1)s} / ((1 − e^{−s})(1 − δ_{n+1}))
    const double next_delta = sech2(0.5 * static_cast<double>(n + 1) * s);
    const double tail = 4.0 * std::pow(q, static_cast<double>(n + 1)) / ((1.0 - q) * (1.0 - next_delta));
    if (tail < kLogTailTolerance * std::max(1.0, std::abs(sum)) || next_delta == 0.0) break;
    if (n > 100000000) throw Error(ErrorKind::Internal, "log_multiplier_product: no convergence");
  }
  if (terms_used) *terms_used = n;
  return sum;
}

namespace {

// Sign-exact surrogate for bisection: partial sums only decrease, so once they
// fall below log(2α) the full product is known to be smaller as well.
double log_product_minus_target(double s, double log_target) {
  const double q = std::exp(-s);
  double sum = 0.0;
  for (std::size_t n = 1;; ++n) {
    const double delta = sech2(0.5 * static_cast<double>(n) * s);
    sum += std::log1p(-delta);
    if (sum < log_target - 1.0) return sum - log_target;
    const double next_delta = sech2(0.5 * static_cast<double>(n + 1) * s);
    const double tail = 4.0 * std::pow(q, static_cast<double>(n + 1)) / ((1.0 - q) * (1.0 - next_delta));
    if (tail < kLogTailTolerance * std::max(1.0, std::abs(sum)) || next_delta == 0.0) break;
  }
  return sum - log_target;
}

}  // namespace

TauSolution solve_tau(double alpha, double tol, double bracket_lo, double bracket_hi) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw Error(ErrorKind::OutOfRange,
                fmt::format("solve_tau: alpha must lie in (0, 1/2), got {}", alpha));
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "solve_tau: tol must be positive");
  if (!(bracket_lo > 0.0 && bracket_hi > bracket_lo)) {
    throw Error(ErrorKind::InvalidArgument, "solve_tau: bracket must satisfy 0 < lo < hi");
  }
  const double log_target = std::log(2.0 * alpha);
  const double s = zoo::bisect(
      [&](double x) { return log_product_minus_target(x, log_target); }, bracket_lo, bracket_hi,
      std::numeric_limits<double>::min());
  std::size_t terms = 0;
  const double product = std::exp(log_multiplier_product(s, &terms));
  TauSolution out{alpha, std::exp(s), s, std::abs(product - 2.0 * alpha), terms};
  if (!(out.residual <= tol)) {
    throw Error(ErrorKind::Internal,
                fmt::format("solve_tau: residual {} above tolerance {}", out.residual, tol));
  }
  return out;
}

// ---------------------------------------------------------------------------

BlaschkeProduct::BlaschkeProduct(const TauSolution& tau, std::size_t cap, double exclusion_radius)
    : alpha_(tau.alpha),
      s_(tau.s),
      cap_(cap),
      exclusion_(exclusion_radius),
      tail_constant_(4.0 / -std::expm1(-tau.s)) {
  if (!(s_ > 0.0)) throw Error(ErrorKind::InvalidArgument, "BlaschkeProduct: need s > 0");
  if (cap_ < 1) throw Error(ErrorKind::InvalidArgument, "BlaschkeProduct: cap must be >= 1");
  if (!(exclusion_ > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "BlaschkeProduct: exclusion radius must be positive");
  }
  for (std::size_t n = 1; n <= cap_; ++n) {
    const double x = 0.5 * static_cast<double>(n) * s_;
    const double delta = sech2(x);
    if (delta == 0.0) break;
    zeros_.push_back(std::tanh(x));
    defects_.push_back(delta);
  }
}

double BlaschkeProduct::tail_sum(std::size_t N) const {
  return tail_constant_ * std::exp(-static_cast<double>(N + 1) * s_);
}

double BlaschkeProduct::error_bound(Complex z, std::size_t N) const {
  const double next_delta = N < defects_.size() ? defects_[N] : 0.0;
  const double one_minus_z2 = std::abs((1.0 - z) * (1.0 + z));
  const double m = std::max(one_minus_z2 - next_delta, 1.0 - std::norm(z));
  if (!(m > 0.0)) return std::numeric_limits<double>::infinity();
  const double S = std::abs(1.0 + z * z) / m * tail_sum(N);
  return std::expm1(S);
}

void BlaschkeProduct::check_exclusion(Complex z) const {
  if (std::abs(z) > 1.0 + 1e-12) {
    throw Error(ErrorKind::OutsideDisk, "Blaschke evaluation needs |z| <= 1");
  }
  const double gap = std::min(std::abs(z - 1.0), std::abs(z + 1.0));
  if (!(gap > exclusion_)) {
    throw TooCloseToSingularity(
        fmt::format("Blaschke evaluation: distance {} to ±1 is inside the exclusion radius {}",
                    gap, exclusion_),
        exclusion_);
  }
}

std::size_t BlaschkeProduct::required_terms(Complex z, double target_err) const {
  if (!(target_err > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "Blaschke evaluation: target_err must be positive");
  }
  check_exclusion(z);
  const std::size_t limit = std::min(cap_, defects_.size());
  for (std::size_t N = 0; N <= limit; ++N) {
    if (error_bound(z, N) <= target_err) return N;
  }
  // |1 − z²| ≈ 2r near ±1; solve the bound at the cap for r
  const double T = tail_sum(cap_);
  const double next_delta = cap_ < defects_.size() ? defects_[cap_] : 0.0;
  const double min_radius = std::max(exclusion_, 0.5 * (next_delta + 2.0 * T / std::log1p(target_err)));
  throw TooCloseToSingularity(
      fmt::format("Blaschke evaluation: {} terms cannot reach error {} at distance {} from ±1",
                  cap_, target_err, std::min(std::abs(z - 1.0), std::abs(z + 1.0))),
      min_radius);
}

BlaschkeProduct::Evaluation BlaschkeProduct::eval(Complex z, double target_err) const {
  const std::size_t N = required_terms(z, target_err);
  const double bound = error_bound(z, N);
  if (z == Complex{0.0}) return {Complex{0.0}, N, bound};
  const Complex w = (1.0 - z) * (1.0 + z);  // 1 − z², accurate near ±1
  const Complex z2 = z * z;
  const Complex one_plus_z2 = 1.0 + z2;
  Complex log_sum{0.0};
  for (std::size_t n = 0; n < N; ++n) {
    const double delta = defects_[n];
    const Complex eps = -delta * one_plus_z2 / (w + delta * z2);
    log_sum += log1p_complex(eps);
  }
  return {z * std::exp(log_sum), N, bound};
}

double BlaschkeProduct::derivative_at_zero() const {
  double sum = 0.0;
  for (std::size_t n = 0; n < defects_.size(); ++n) {
    sum += std::log1p(-defects_[n]);
    const double next = n + 1 < defects_.size() ? defects_[n + 1] : 0.0;
    if (tail_sum(n + 1) / (1.0 - next) < 1e-17) break;
  }
  return std::exp(sum);
}

double BlaschkeProduct::circle_eval(double theta, double target_err) const {
  const Complex z = std::polar(1.0, theta);
  const Evaluation e = eval(z, target_err);
  const double modulus_gap = std::abs(std::abs(e.value) - 1.0);
  if (!(modulus_gap <= target_err)) {
    throw Error(ErrorKind::Internal,
                fmt::format("circle_eval: |B(e^(i{}))| deviates from 1 by {}", theta, modulus_gap));
  }
  return std::arg(e.value);
}

nlohmann::json to_json(const TauSolution& t) {
  return {{"alpha", t.alpha},
          {"tau", t.tau},
          {"s", t.s},
          {"residual", t.residual},
          {"product_terms_used", t.product_terms_used}};
}

double MultiplierReport::worst_gap() const {
  const double target = 2.0 * alpha;
  return std::max({std::abs(f_prime_at_1 - target), std::abs(sine_prime_at_0 - target),
                   std::abs(blaschke_prime_at_0 - target)});
}

nlohmann::json MultiplierReport::to_json() const {
  return {{"alpha", alpha},
          {"f_prime_at_1", f_prime_at_1},
          {"sine_prime_at_0", sine_prime_at_0},
          {"blaschke_prime_at_0", blaschke_prime_at_0},
          {"tau", baker::to_json(tau)}};
}

MultiplierReport multiplier_check(double alpha) {
  const TauSolution t = solve_tau(alpha);
  const BlaschkeProduct b(t);
  const auto f1 = zoo::derivative(zoo::MapSpec::exp_baker(alpha), 1.0).value();
  const auto s0 = zoo::derivative(zoo::MapSpec::sine_model(alpha), 0.0).value();
  // both derivatives are real at these real fixed points
  return {alpha, f1.real(), s0.real(), b.derivative_at_zero(), t};
}

nlohmann::json SemiconjugacyReport::to_json() const {
  return {{"alpha", alpha},
          {"samples", samples},
          {"seed", seed},
          {"im_max", im_max},
          {"max_residual", max_residual},
          {"max_relative_residual", max_relative_residual},
          {"worst_z", {worst_z.real(), worst_z.imag()}}};
}

SemiconjugacyReport verify_semiconjugacy(double alpha, std::size_t samples, std::uint64_t seed,
                                         double im_max) {
  if (samples < 1) throw Error(ErrorKind::EmptyInput, "verify_semiconjugacy needs samples");
  if (!(im_max >= 0.0)) throw Error(ErrorKind::InvalidArgument, "im_max must be non-negative");
  const auto f = zoo::MapSpec::exp_baker(alpha);
  const auto F = zoo::MapSpec::sine_model(alpha);
  const Complex I{0.0, 1.0};
  std::vector<double> abs_res(samples), rel_res(samples);
  std::vector<Complex> zs(samples);
  parallel_for(samples, [&](std::size_t i) {
    CounterStream rng(seed, i);
    const double re = -kPi + kTwoPi * rng.uniform();
    const double im = im_max * (2.0 * rng.uniform() - 1.0);
    const Complex z{re, im};
    const Complex lhs = zoo::eval(f, std::exp(I * z)).value();
    const Complex rhs = std::exp(I * zoo::eval(F, z).value());
    zs[i] = z;
    abs_res[i] = std::abs(lhs - rhs);
    rel_res[i] = abs_res[i] / std::abs(rhs);
  });
  const auto worst = std::max_element(abs_res.begin(), abs_res.end()) - abs_res.begin();
  return {alpha, samples, seed, im_max, abs_res[worst],
          *std::max_element(rel_res.begin(), rel_res.end()), zs[worst]};
}

}  // namespace fatoulab::baker
