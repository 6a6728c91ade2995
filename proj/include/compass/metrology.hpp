#pragma once

// Displacement sensitivity of bipartite states: both modes receive the same
// momentum kick and the overlap with the unperturbed state is swept against
// the shift s. For compass states the overlap oscillates as cos(4 x0 s + theta)
// under a Gaussian envelope.

#include <cstddef>
#include <optional>
#include <vector>

#include "compass/coherent_state.hpp"

namespace compass {

/// Coherent-units displacement applied to each mode for shift s:
/// gamma = i sqrt2 delta s sign(Re alpha), a momentum kick of 2 hbar s sign(x0).
/// Throws InvalidArgument when Re alpha = 0.
cplx shift_amplitude(const ModeGeometry& g, cplx alpha, double s);

/// |<psi| D1(gamma) D2(gamma) |psi>|^2 for a normalized state.
double perturbed_overlap(const BipartiteState& state, cplx alpha, double s);

/// exp(-2 |gamma|^2): the same overlap for the product state |alpha>|i alpha>.
double shift_envelope(const ModeGeometry& g, cplx alpha, double s);

/// Fringe frequency 4 |x0| in units of 1 / s.
double expected_frequency(const ModeGeometry& g, cplx alpha);

struct SensitivityCurve {
  std::vector<double> s;
  std::vector<double> overlap;
  std::vector<double> envelope;
};

/// n >= 32 uniform samples on [s_min, s_max]; the range must span at least
/// two expected fringes.
SensitivityCurve sensitivity_sweep(const BipartiteState& state, cplx alpha, double s_min, double s_max,
                                   std::size_t n);

struct CosFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;
  /// Wrapped to (-pi, pi].
  double phase = 0.0;
  double residual_rms = 0.0;

  double operator()(double s) const;
};

/// Least-squares fit of offset + amplitude cos(frequency s + phase). The
/// frequency starts at the periodogram peak of the mean-removed samples and
/// is refined by a 1-D search over the linear least-squares residual, then
/// polished by Gauss-Newton. Optional weights multiply the residuals.
/// Throws NumericalError for flat data (amplitude < 1e-9), fewer than two
/// fringes, fewer than 8 samples per fringe, or a failed polish.
CosFit fit_cosine(const std::vector<double>& s, const std::vector<double>& y,
                  const std::vector<double>& weights = {});

/// Fits overlap / envelope with the envelope as weight, so the fringes are
/// fitted with the Gaussian decay divided out and the far tail deweighted.
CosFit fit_cosine(const SensitivityCurve& curve);

/// A dip where the envelope is below this is attributed to the envelope.
inline constexpr double kEnvelopeFloor = 0.1;

/// Smallest s > 0 where the exact overlap has a local minimum below 0.05,
/// refined by a 1-D minimization inside the bracketing samples. Throws
/// NumericalError when no sample falls below 0.05, or when the first such
/// minimum sits where the envelope is below kEnvelopeFloor.
double first_overlap_zero(const SensitivityCurve& curve, const BipartiteState& state, cplx alpha);

/// Same on sampled data alone (parabolic refinement on the three samples
/// around the minimum). The envelope check applies when curve.envelope is
/// filled.
double first_overlap_zero(const SensitivityCurve& curve);

}  // namespace compass
