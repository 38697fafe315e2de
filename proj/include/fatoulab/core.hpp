#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace fatoulab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A point of the Riemann sphere: a finite complex number, or the point at
/// infinity as a separate flagged state. Only the PowerMap and McMullen
/// evaluations produce or consume the infinite state.
class ComplexPoint {
 public:
  constexpr ComplexPoint() = default;
  constexpr ComplexPoint(Complex z) : z_(z) {}  // NOLINT(implicit)
  constexpr ComplexPoint(double re) : z_(re, 0.0) {}  // NOLINT(implicit)
  constexpr ComplexPoint(double re, double im) : z_(re, im) {}

  static constexpr ComplexPoint infinity() {
    ComplexPoint p;
    p.infinite_ = true;
    return p;
  }

  constexpr bool is_infinity() const { return infinite_; }
  constexpr Complex value() const { return z_; }
  constexpr double re() const { return z_.real(); }
  constexpr double im() const { return z_.imag(); }

  friend constexpr bool operator==(const ComplexPoint& a, const ComplexPoint& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.z_ == b.z_;
  }

 private:
  Complex z_{0.0, 0.0};
  bool infinite_ = false;
};

/// Reduce an angle to [0, 2π).
inline double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative can round up to exactly 2π after the shift
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Angle of z in [0, 2π).
inline double angle_of(Complex z) { return wrap_angle(std::arg(z)); }

}  // namespace fatoulab
