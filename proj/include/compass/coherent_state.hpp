#pragma once

// Finite superpositions of coherent states on one or two oscillator modes.
//
// Every state in this library is a list of complex-weighted Gaussian
// components. Inner products reduce to the closed-form coherent overlap
// <beta|alpha> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(beta) alpha), so no
// Fock truncation is involved anywhere in this module.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "compass/geometry.hpp"

namespace compass {

/// Centers closer than this are merged into one component.
inline constexpr double kMergeTolerance = 1e-12;
/// norm^2 below this fraction of (sum |w|)^2 is treated as the zero vector.
inline constexpr double kDegeneracyThreshold = 1e-12;

template <std::size_t Modes>
struct Component {
  cplx weight;
  std::array<cplx, Modes> centers;
};

/// Immutable coherent-state superposition. The component list is
/// canonicalized on construction: components with coinciding centers are
/// merged (first-occurrence order kept) and exactly-zero weights dropped.
/// Construction does not normalize; see normalized().
template <std::size_t Modes>
class Superposition {
 public:
  static constexpr std::size_t kModes = Modes;

  /// Throws DegenerateStateError if nothing survives canonicalization.
  Superposition(ModeGeometry geometry, std::vector<Component<Modes>> components);

  const ModeGeometry& geometry() const { return geometry_; }
  std::span<const Component<Modes>> components() const { return components_; }
  std::size_t size() const { return components_.size(); }

  double norm_squared() const;

  /// Unit-norm copy. Throws DegenerateStateError when the state is null
  /// within kDegeneracyThreshold.
  Superposition normalized() const;

  /// Copy with all weights multiplied by `factor`.
  Superposition scaled(cplx factor) const;

 private:
  ModeGeometry geometry_;
  std::vector<Component<Modes>> components_;
};

using SingleModeState = Superposition<1>;
using BipartiteState = Superposition<2>;

/// <beta|alpha> for coherent states.
cplx coherent_overlap(cplx alpha, cplx beta);

/// <bra|ket>. Throws InvalidArgument on geometry mismatch.
template <std::size_t Modes>
cplx inner_product(const Superposition<Modes>& bra, const Superposition<Modes>& ket);

/// |<a|b>|^2 / (<a|a><b|b>).
template <std::size_t Modes>
double fidelity(const Superposition<Modes>& a, const Superposition<Modes>& b);

SingleModeState coherent_state(cplx alpha, ModeGeometry geometry = {});
SingleModeState vacuum(ModeGeometry geometry = {});

enum class Parity { even, odd };

/// Normalized (|alpha> + |-alpha>) or (|alpha> - |-alpha>).
SingleModeState make_cat(cplx alpha, Parity parity, ModeGeometry geometry = {});

/// Normalized |alpha> + |-alpha> + |i alpha> + |-i alpha>.
SingleModeState make_compass_single(cplx alpha, ModeGeometry geometry = {});

enum class CoefficientBasis { coherent, cat };

/// {a,b,c,d} multiply the symmetrized coherent pairs
///   a: |a,ia> + |ia,a>      b: |-a,-ia> + |-ia,-a>
///   c: |a,-ia> + |-ia,a>    d: |-a,ia> + |ia,-a>
/// and {A,B,C,D} the symmetrized products of normalized cats
///   A: C+(a) C+(ia)   B: C-(a) C-(ia)   C: C+(a) C-(ia)   D: C-(a) C+(ia)
/// (each written with its particle-swapped partner and a 1/sqrt(2)).
struct CompassCoefficients {
  CoefficientBasis basis = CoefficientBasis::coherent;
  std::array<cplx, 4> values{};

  bool any_nonzero() const;
};

/// True iff (a != 0 and b != 0) or (c != 0 and d != 0). Requires the
/// coherent basis; convert cat coefficients first.
bool sub_planck_admissible(const CompassCoefficients& coherent);

/// Maps coherent <-> cat coefficients for amplitude alpha. Throws
/// DegenerateStateError at alpha = 0 where the odd cat does not exist.
CompassCoefficients convert_coeffs(const CompassCoefficients& coeffs, cplx alpha);

/// Normalized bipartite compass state. Cat-basis input is converted first.
/// Throws DegenerateStateError for all-zero coefficients or a null result.
BipartiteState make_compass_bipartite(const CompassCoefficients& coeffs, cplx alpha,
                                      ModeGeometry geometry = {});

/// D(gamma) on each mode: center alpha -> alpha + gamma with the Weyl phase
/// exp((gamma conj(alpha) - conj(gamma) alpha) / 2) on the weight.
SingleModeState displace(const SingleModeState& state, cplx gamma);
BipartiteState displace(const BipartiteState& state, cplx gamma1, cplx gamma2);

enum class RotatedModes { first, second, both };

/// exp(-i theta a^dagger a) on the selected modes: alpha -> e^{-i theta} alpha.
SingleModeState rotate(const SingleModeState& state, double theta);
BipartiteState rotate(const BipartiteState& state, double theta, RotatedModes modes);

/// <x|alpha> = pi^{-1/4} delta^{-1/2} exp(-(x-x0)^2/(2 delta^2) + i p0 x/hbar - i p0 x0/(2 hbar)).
cplx coherent_wavefunction(const ModeGeometry& geometry, cplx alpha, double x);

cplx position_amplitude(const SingleModeState& state, double x);
cplx position_amplitude(const BipartiteState& state, double x1, double x2);

}  // namespace compass
