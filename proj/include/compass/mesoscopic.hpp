#pragma once

// Near-origin form of the bipartite compass Wigner function.
//
// Close to the phase-space origin only the pairs whose centers are exact
// negatives of each other (in both modes) survive; every other pair term is a
// Gaussian sitting at least |alpha| / sqrt(2) away. Each surviving pair is a
// plane wave under the common envelope exp(-2|zeta1|^2 - 2|zeta2|^2).
//
// The components fall into two families:
//   family 1: mode 1 at +-alpha, mode 2 at +-i alpha
//   family 2: mode 1 at +-i alpha, mode 2 at +-alpha
// and within a family the pair sum collapses to
//   cc cos u cos v + cs cos u sin v + sc sin u cos v + ss sin u sin v
// with u the mode-1 phase and v the mode-2 phase of that family.

#include <array>

#include "compass/coherent_state.hpp"
#include "compass/wigner.hpp"

namespace compass {

struct TrigProducts {
  double cc = 0.0;
  double cs = 0.0;
  double sc = 0.0;
  double ss = 0.0;
};

/// Coefficients of the four oscillations of an x1p1-type slice at fixed
/// (x2, p2):
///   W / envelope = B1 cos u1 + B4 sin u1 + B2 cos u2 + B3 sin u2
/// where u1 is the family-1 mode-1 phase and u2 the family-2 one.
struct SliceCoefficients {
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double b4 = 0.0;
};

class MesoscopicModel {
 public:
  MesoscopicModel(const CompassCoefficients& coeffs, cplx alpha, ModeGeometry geometry = {});

  double evaluate(const PhaseSpacePoint& pt) const;

  /// Phases (u, v) of each family at pt.
  std::array<double, 2> family_phases(int family, const PhaseSpacePoint& pt) const;

  SliceCoefficients slice_coefficients(double x2, double p2) const;

  const TrigProducts& family(int index) const { return families_.at(static_cast<std::size_t>(index)); }

  /// {cc of family 1, cc of family 2, cs of family 1, sc of family 2}.
  std::array<double, 4> a_coefficients() const;

  /// x0^2 / delta^2 >= 9 with x0 = sqrt2 delta |alpha|.
  bool in_regime() const { return in_regime_; }
  double regime_ratio() const { return regime_ratio_; }

  const ModeGeometry& geometry() const { return geometry_; }
  cplx alpha() const { return alpha_; }

 private:
  ModeGeometry geometry_;
  cplx alpha_;
  std::array<TrigProducts, 2> families_{};
  double regime_ratio_ = 0.0;
  bool in_regime_ = false;
};

/// One-shot evaluation; check MesoscopicModel::in_regime for the validity flag.
double mesoscopic_wigner(const CompassCoefficients& coeffs, cplx alpha, const PhaseSpacePoint& pt,
                         ModeGeometry geometry = {});

WignerSlice mesoscopic_slice(const MesoscopicModel& model, const SliceBinding& binding, const GridSpec& first,
                             const GridSpec& second);

}  // namespace compass
