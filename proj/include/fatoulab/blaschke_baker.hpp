#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "fatoulab/core.hpp"

namespace fatoulab::baker {

/// Parameter of the inner function of Baker's basin for f(z) = exp(α(z − 1/z)).
///
/// The zeros are a_n = (τⁿ − 1)/(τⁿ + 1) = tanh(n s / 2) with s = ln τ. The
/// product B′(0) = ∏ a_n² must equal the multiplier 2α of the fixed point
/// (f′(1) = F′(0) = 2α for F(z) = 2α sin z), so τ is taken as the unique root
/// of P(s) = ∏ tanh²(n s/2) = 2α. P increases strictly from 0 to 1 on
/// (0, ∞). The equation is an assumption resting on conjugacy invariance of
/// multipliers.
struct TauSolution {
  double alpha;
  double tau;
  double s;                  // ln τ
  double residual;           // |P(s) − 2α|
  std::size_t product_terms_used;
};

/// log P(s) with the tail beyond the returned term count below 1e-18.
double log_multiplier_product(double s, std::size_t* terms_used = nullptr);

TauSolution solve_tau(double alpha, double tol = 1e-12, double bracket_lo = 1e-6,
                      double bracket_hi = 50.0);

/// B(z) = z ∏_{n≥1} (a_n² − z²)/(1 − a_n² z²), singular only at ±1.
///
/// Each factor is 1 + ε_n with ε_n = −δ_n (1 + z²)/(1 − a_n² z²), δ_n = 1 − a_n²
/// = sech²(n s/2) ≤ 4 e^{−n s}. For |z| ≤ 1 and n > N,
///   |1 − a_n² z²| ≥ m_N := max(|1 − z²| − δ_{N+1}, 1 − |z|²),
/// so Σ_{n>N} |ε_n| ≤ |1 + z²| / m_N · 4 e^{−(N+1)s} / (1 − e^{−s}) =: S_N and
/// |B − B_N| ≤ expm1(S_N). N is the smallest count meeting the target.
class BlaschkeProduct {
 public:
  static constexpr std::size_t kDefaultCap = 10000;
  static constexpr double kDefaultExclusion = 1e-3;

  explicit BlaschkeProduct(const TauSolution& tau, std::size_t cap = kDefaultCap,
                           double exclusion_radius = kDefaultExclusion);

  double s() const { return s_; }
  double alpha() const { return alpha_; }
  /// a_n for 1 ≤ n ≤ truncation_N().
  double zero(std::size_t n) const { return zeros_.at(n - 1); }
  /// 1 − a_n².
  double zero_defect(std::size_t n) const { return defects_.at(n - 1); }
  /// Number of materialized zeros (beyond it δ_n underflows or the cap binds).
  std::size_t truncation_N() const { return zeros_.size(); }
  std::size_t cap() const { return cap_; }
  double exclusion_radius() const { return exclusion_; }
  /// 4 / (1 − e^{−s}): Σ_{n>N} δ_n ≤ tail_bound_constant · e^{−(N+1)s}.
  double tail_bound_constant() const { return tail_constant_; }

  struct Evaluation {
    Complex value;
    std::size_t terms;
    double error_bound;
  };

  /// Smallest N meeting target_err at z; throws TooCloseToSingularity when
  /// z is inside the exclusion radius or the cap cannot meet the target.
  std::size_t required_terms(Complex z, double target_err) const;
  Evaluation eval(Complex z, double target_err) const;

  /// B′(0) = ∏ a_n², tail below 1e-17 relative.
  double derivative_at_zero() const;

  /// arg B(e^{iθ}) in (−π, π]. Checks |B(e^{iθ})| = 1 within target_err.
  double circle_eval(double theta, double target_err) const;

 private:
  double tail_sum(std::size_t N) const;  // bound on Σ_{n>N} δ_n
  double error_bound(Complex z, std::size_t N) const;
  void check_exclusion(Complex z) const;

  double alpha_;
  double s_;
  std::size_t cap_;
  double exclusion_;
  double tail_constant_;
  std::vector<double> zeros_;
  std::vector<double> defects_;
};

nlohmann::json to_json(const TauSolution& t);

/// The fixed-point multipliers f′(1), F′(0) and B′(0), which all equal 2α.
struct MultiplierReport {
  double alpha;
  double f_prime_at_1;
  double sine_prime_at_0;
  double blaschke_prime_at_0;
  TauSolution tau;

  double worst_gap() const;
  nlohmann::json to_json() const;
};

MultiplierReport multiplier_check(double alpha);

/// max |f(e^{iz}) − e^{iF(z)}| over z with Re z uniform on [−π, π) and Im z
/// uniform on [−im_max, im_max]; sample i draws from CounterStream(seed, i).
/// The values reach e^{2α cosh(im_max)}, so the relative residual is reported
/// alongside.
struct SemiconjugacyReport {
  double alpha;
  std::size_t samples;
  std::uint64_t seed;
  double im_max;
  double max_residual;
  double max_relative_residual;
  Complex worst_z;

  nlohmann::json to_json() const;
};

SemiconjugacyReport verify_semiconjugacy(double alpha, std::size_t samples, std::uint64_t seed,
                                         double im_max = 3.0);

}  // namespace fatoulab::baker
