#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "compass/errors.hpp"

namespace compass {

using cplx = std::complex<double>;

inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kPi = std::numbers::pi;

/// Unit system of one oscillator mode. `delta` is the ground-state width
/// sqrt(hbar / (m omega)); coherent amplitudes map to quadratures as
///   x = sqrt(2) delta Re(alpha),   p = sqrt(2) hbar Im(alpha) / delta.
struct ModeGeometry {
  double hbar = 1.0;
  double delta = 1.0;

  void validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("geometry: hbar must be > 0");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("geometry: delta must be > 0");
  }

  double mass_frequency() const { return hbar / (delta * delta); }
  double position_of(cplx alpha) const { return kSqrt2 * delta * alpha.real(); }
  double momentum_of(cplx alpha) const { return kSqrt2 * hbar * alpha.imag() / delta; }
  cplx amplitude_at(double x, double p) const {
    return {x / (kSqrt2 * delta), p * delta / (kSqrt2 * hbar)};
  }

  bool operator==(const ModeGeometry&) const = default;
};

}  // namespace compass
