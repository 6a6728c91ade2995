#pragma once

// Wigner functions of coherent-state superpositions.
//
// Closed form: each ordered pair of components (j, k) contributes the Wigner
// transform of |c_j><c_k|, a Gaussian centered at the midpoint of the two
// phase-space centers modulated by a plane wave fixed by their separation:
//
//   W_jk(zeta) = (pi hbar)^{-1} <c_k|c_j> exp(-2 (zeta - c_j)(conj(zeta) - conj(c_k)))
//
// with zeta = x / (sqrt2 delta) + i p delta / (sqrt2 hbar). Bipartite pairs are
// products of two such factors.
//
// The numeric route integrates the correlation function of the position
// wavefunction directly (trapezoid rule) and shares no code with the closed
// form beyond coherent_wavefunction.

#include <array>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "compass/coherent_state.hpp"

namespace compass {

struct PhaseSpacePoint {
  double x1 = 0.0;
  double p1 = 0.0;
  double x2 = 0.0;
  double p2 = 0.0;
};

enum class Axis { x1, p1, x2, p2 };

std::string_view axis_name(Axis axis);
Axis parse_axis(std::string_view name);
double& axis_ref(PhaseSpacePoint& pt, Axis axis);
double axis_value(const PhaseSpacePoint& pt, Axis axis);

/// Uniform samples min, min + h, ..., max with h = (max - min) / (n - 1).
struct GridSpec {
  double min = -1.0;
  double max = 1.0;
  std::size_t n = 101;

  void validate() const;
  double spacing() const { return (max - min) / static_cast<double>(n - 1); }
  double at(std::size_t i) const { return min + spacing() * static_cast<double>(i); }
};

/// Two free axes; `fixed` supplies the values of the remaining two
/// coordinates (entries on the free axes are ignored).
struct SliceBinding {
  Axis first = Axis::x1;
  Axis second = Axis::p1;
  PhaseSpacePoint fixed{};

  void validate() const;
  PhaseSpacePoint point(double first_value, double second_value) const;
};

enum class WignerMethod { analytic, numeric, mesoscopic };

std::string_view method_name(WignerMethod method);

/// Sampled 2-D slice. values is row-major with rows along the second axis:
/// values[i_second * first.n + i_first].
struct WignerSlice {
  SliceBinding binding;
  GridSpec first;
  GridSpec second;
  std::vector<double> values;
  WignerMethod provenance = WignerMethod::analytic;

  double at(std::size_t i_first, std::size_t i_second) const { return values[i_second * first.n + i_first]; }
  double max_abs() const;
};

/// Trapezoid rule on [-half_width, half_width] with `points` samples per axis.
struct QuadratureSpec {
  double half_width = 26.0;
  std::size_t points = 256;

  void validate() const;
};

/// Closed-form Wigner function. Throws NumericalError if the imaginary
/// residue of the pair sum exceeds 1e-9 (an implementation fault).
double wigner_analytic(const SingleModeState& state, double x, double p);
double wigner_analytic(const BipartiteState& state, const PhaseSpacePoint& pt);

/// The raw complex pair sum; its imaginary part is the realness residue.
cplx wigner_pair_sum(const SingleModeState& state, double x, double p);
cplx wigner_pair_sum(const BipartiteState& state, const PhaseSpacePoint& pt);

/// Trapezoid evaluation of the correlation-function integral. Throws
/// NumericalError when the integrand at the window edge exceeds 1e-16 of
/// its peak bound (window too small).
double wigner_numeric(const SingleModeState& state, double x, double p, const QuadratureSpec& quad);
double wigner_numeric(const BipartiteState& state, const PhaseSpacePoint& pt, const QuadratureSpec& quad);

struct NumericWigner {
  double value;
  /// |W(2M) - W(M)|: change when the point count is doubled.
  double doubling_change;
};

NumericWigner wigner_numeric_checked(const BipartiteState& state, const PhaseSpacePoint& pt,
                                     const QuadratureSpec& quad);

using PhaseSpaceFunction = std::function<double(const PhaseSpacePoint&)>;

WignerSlice wigner_slice(const PhaseSpaceFunction& w, const SliceBinding& binding, const GridSpec& first,
                         const GridSpec& second, WignerMethod provenance);

/// Analytic or numeric slice of a bipartite state. Mesoscopic slices need
/// the compass parameters; see mesoscopic.hpp.
WignerSlice wigner_slice(const BipartiteState& state, const SliceBinding& binding, const GridSpec& first,
                         const GridSpec& second, WignerMethod method, const QuadratureSpec& quad = {});

/// Integral of W over the 4-D grid using the separable x/p structure of each
/// pair term. Equals the squared norm. Throws NumericalError when a grid does
/// not cover 6 sigma around every component or is too coarse for the
/// interference fringes.
double integrate_wigner(const BipartiteState& state, const std::array<GridSpec, 4>& grids);
double integrate_wigner(const SingleModeState& state, const GridSpec& x, const GridSpec& p);

/// W integrated over every axis except `axis`, sampled on grids[axis].
/// For a position axis this is the reduced position density.
std::vector<double> marginal(const BipartiteState& state, Axis axis, const std::array<GridSpec, 4>& grids);
/// Single mode: `axis` is x1 (position) or p1 (momentum).
std::vector<double> marginal(const SingleModeState& state, Axis axis, const GridSpec& x, const GridSpec& p);

/// Largest |W| over the component centers and the phase-space origin; the
/// scale against which interference features are judged significant.
double peak_magnitude(const BipartiteState& state);

}  // namespace compass
