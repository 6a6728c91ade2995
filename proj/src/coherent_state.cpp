#include "compass/coherent_state.hpp"

#include <algorithm>
#include <cmath>

namespace compass {

namespace {

template <std::size_t Modes>
bool same_centers(const std::array<cplx, Modes>& a, const std::array<cplx, Modes>& b) {
  for (std::size_t m = 0; m < Modes; ++m) {
    if (std::abs(a[m] - b[m]) > kMergeTolerance) return false;
  }
  return true;
}

template <std::size_t Modes>
std::vector<Component<Modes>> canonicalize(std::vector<Component<Modes>> raw) {
  std::vector<Component<Modes>> merged;
  merged.reserve(raw.size());
  for (const auto& c : raw) {
    for (std::size_t m = 0; m < Modes; ++m) {
      if (!std::isfinite(c.centers[m].real()) || !std::isfinite(c.centers[m].imag()))
        throw InvalidArgument("component center is not finite");
    }
    if (!std::isfinite(c.weight.real()) || !std::isfinite(c.weight.imag()))
      throw InvalidArgument("component weight is not finite");
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const Component<Modes>& m) { return same_centers(m.centers, c.centers); });
    if (it == merged.end()) {
      merged.push_back(c);
    } else {
      it->weight += c.weight;
    }
  }
  std::erase_if(merged, [](const Component<Modes>& c) { return c.weight == cplx{0.0, 0.0}; });
  return merged;
}

template <std::size_t Modes>
cplx component_overlap(const Component<Modes>& bra, const Component<Modes>& ket) {
  // Product of per-mode overlaps, folded into one exponential.
  cplx exponent{0.0, 0.0};
  for (std::size_t m = 0; m < Modes; ++m) {
    const cplx a = ket.centers[m];
    const cplx b = bra.centers[m];
    exponent += -0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(b) * a;
  }
  return std::conj(bra.weight) * ket.weight * std::exp(exponent);
}

cplx weyl_phase(cplx gamma, cplx alpha) {
  return std::exp(0.5 * (gamma * std::conj(alpha) - std::conj(gamma) * alpha));
}

}  // namespace

template <std::size_t Modes>
Superposition<Modes>::Superposition(ModeGeometry geometry, std::vector<Component<Modes>> components)
    : geometry_(geometry), components_(canonicalize(std::move(components))) {
  geometry_.validate();
  if (components_.empty()) throw DegenerateStateError("state has no surviving components");
}

template <std::size_t Modes>
double Superposition<Modes>::norm_squared() const {
  return inner_product(*this, *this).real();
}

template <std::size_t Modes>
Superposition<Modes> Superposition<Modes>::normalized() const {
  double weight_scale = 0.0;
  for (const auto& c : components_) weight_scale += std::abs(c.weight);
  const double n2 = norm_squared();
  if (!(n2 > kDegeneracyThreshold * weight_scale * weight_scale)) {
    throw DegenerateStateError("state norm vanishes (norm^2 = " + std::to_string(n2) + ")");
  }
  return scaled(1.0 / std::sqrt(n2));
}

template <std::size_t Modes>
Superposition<Modes> Superposition<Modes>::scaled(cplx factor) const {
  auto comps = components_;
  for (auto& c : comps) c.weight *= factor;
  return Superposition(geometry_, std::move(comps));
}

cplx coherent_overlap(cplx alpha, cplx beta) {
  return std::exp(-0.5 * std::norm(alpha) - 0.5 * std::norm(beta) + std::conj(beta) * alpha);
}

template <std::size_t Modes>
cplx inner_product(const Superposition<Modes>& bra, const Superposition<Modes>& ket) {
  if (!(bra.geometry() == ket.geometry())) throw InvalidArgument("inner_product: geometry mismatch");
  cplx sum{0.0, 0.0};
  for (const auto& b : bra.components()) {
    for (const auto& k : ket.components()) sum += component_overlap(b, k);
  }
  return sum;
}

template <std::size_t Modes>
double fidelity(const Superposition<Modes>& a, const Superposition<Modes>& b) {
  return std::norm(inner_product(a, b)) / (a.norm_squared() * b.norm_squared());
}

template class Superposition<1>;
template class Superposition<2>;
template cplx inner_product(const Superposition<1>&, const Superposition<1>&);
template cplx inner_product(const Superposition<2>&, const Superposition<2>&);
template double fidelity(const Superposition<1>&, const Superposition<1>&);
template double fidelity(const Superposition<2>&, const Superposition<2>&);

SingleModeState coherent_state(cplx alpha, ModeGeometry geometry) {
  return SingleModeState(geometry, {{{1.0, 0.0}, {alpha}}});
}

SingleModeState vacuum(ModeGeometry geometry) { return coherent_state({0.0, 0.0}, geometry); }

SingleModeState make_cat(cplx alpha, Parity parity, ModeGeometry geometry) {
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  try {
    return SingleModeState(geometry, {{{1.0, 0.0}, {alpha}}, {{sign, 0.0}, {-alpha}}}).normalized();
  } catch (const DegenerateStateError&) {
    throw DegenerateStateError("odd cat state with alpha = 0 is the zero vector");
  }
}

SingleModeState make_compass_single(cplx alpha, ModeGeometry geometry) {
  if (alpha == cplx{0.0, 0.0}) throw DegenerateStateError("compass state needs alpha != 0");
  const cplx i{0.0, 1.0};
  return SingleModeState(geometry, {{1.0, {alpha}}, {1.0, {-alpha}}, {1.0, {i * alpha}}, {1.0, {-i * alpha}}})
      .normalized();
}

bool CompassCoefficients::any_nonzero() const {
  return std::any_of(values.begin(), values.end(), [](cplx v) { return v != cplx{0.0, 0.0}; });
}

bool sub_planck_admissible(const CompassCoefficients& coherent) {
  if (coherent.basis != CoefficientBasis::coherent)
    throw InvalidArgument("sub_planck_admissible expects coherent-basis coefficients");
  const auto& v = coherent.values;
  const cplx zero{0.0, 0.0};
  return (v[0] != zero && v[1] != zero) || (v[2] != zero && v[3] != zero);
}

namespace {

// Rows a,b,c,d; columns A,B,C,D. Columns are mutually orthogonal, each with
// squared length 4.
constexpr double kCatSigns[4][4] = {
    {1, 1, 1, 1},
    {1, 1, -1, -1},
    {1, -1, -1, 1},
    {1, -1, 1, -1},
};

// Scale of each cat-basis column: n_s n_t / sqrt(2) with n_+- the cat
// normalizations 1/sqrt(2(1 +- e^{-2|alpha|^2})).
std::array<double, 4> cat_column_scales(cplx alpha) {
  const double r2 = std::norm(alpha);
  const double even = 2.0 * (1.0 + std::exp(-2.0 * r2));
  const double odd = -2.0 * std::expm1(-2.0 * r2);
  if (!(odd > 0.0)) throw DegenerateStateError("cat basis is singular at alpha = 0");
  const double n_even = 1.0 / std::sqrt(even);
  const double n_odd = 1.0 / std::sqrt(odd);
  return {n_even * n_even / kSqrt2, n_odd * n_odd / kSqrt2, n_even * n_odd / kSqrt2, n_even * n_odd / kSqrt2};
}

}  // namespace

CompassCoefficients convert_coeffs(const CompassCoefficients& coeffs, cplx alpha) {
  const auto scale = cat_column_scales(alpha);
  CompassCoefficients out;
  if (coeffs.basis == CoefficientBasis::cat) {
    out.basis = CoefficientBasis::coherent;
    for (int row = 0; row < 4; ++row) {
      cplx sum{0.0, 0.0};
      for (int col = 0; col < 4; ++col) sum += kCatSigns[row][col] * scale[col] * coeffs.values[col];
      out.values[row] = sum;
    }
  } else {
    out.basis = CoefficientBasis::cat;
    for (int col = 0; col < 4; ++col) {
      cplx sum{0.0, 0.0};
      for (int row = 0; row < 4; ++row) sum += kCatSigns[row][col] * coeffs.values[row];
      out.values[col] = sum / (4.0 * scale[col]);
    }
  }
  return out;
}

BipartiteState make_compass_bipartite(const CompassCoefficients& coeffs, cplx alpha, ModeGeometry geometry) {
  if (!coeffs.any_nonzero()) throw DegenerateStateError("all compass coefficients are zero");
  const CompassCoefficients coherent =
      coeffs.basis == CoefficientBasis::coherent ? coeffs : convert_coeffs(coeffs, alpha);
  const auto& [a, b, c, d] = coherent.values;
  const cplx ia = cplx{0.0, 1.0} * alpha;
  std::vector<Component<2>> comps = {
      {a, {alpha, ia}},  {a, {ia, alpha}},  {b, {-alpha, -ia}}, {b, {-ia, -alpha}},
      {c, {alpha, -ia}}, {c, {-ia, alpha}}, {d, {-alpha, ia}},  {d, {ia, -alpha}},
  };
  try {
    return BipartiteState(geometry, std::move(comps)).normalized();
  } catch (const DegenerateStateError& e) {
    throw DegenerateStateError(std::string("compass state is degenerate: ") + e.what());
  }
}

SingleModeState displace(const SingleModeState& state, cplx gamma) {
  std::vector<Component<1>> comps(state.components().begin(), state.components().end());
  for (auto& c : comps) {
    c.weight *= weyl_phase(gamma, c.centers[0]);
    c.centers[0] += gamma;
  }
  return SingleModeState(state.geometry(), std::move(comps));
}

BipartiteState displace(const BipartiteState& state, cplx gamma1, cplx gamma2) {
  std::vector<Component<2>> comps(state.components().begin(), state.components().end());
  for (auto& c : comps) {
    c.weight *= weyl_phase(gamma1, c.centers[0]) * weyl_phase(gamma2, c.centers[1]);
    c.centers[0] += gamma1;
    c.centers[1] += gamma2;
  }
  return BipartiteState(state.geometry(), std::move(comps));
}

SingleModeState rotate(const SingleModeState& state, double theta) {
  const cplx phase = std::polar(1.0, -theta);
  std::vector<Component<1>> comps(state.components().begin(), state.components().end());
  for (auto& c : comps) c.centers[0] *= phase;
  return SingleModeState(state.geometry(), std::move(comps));
}

BipartiteState rotate(const BipartiteState& state, double theta, RotatedModes modes) {
  const cplx phase = std::polar(1.0, -theta);
  std::vector<Component<2>> comps(state.components().begin(), state.components().end());
  for (auto& c : comps) {
    if (modes != RotatedModes::second) c.centers[0] *= phase;
    if (modes != RotatedModes::first) c.centers[1] *= phase;
  }
  return BipartiteState(state.geometry(), std::move(comps));
}

cplx coherent_wavefunction(const ModeGeometry& g, cplx alpha, double x) {
  const double x0 = g.position_of(alpha);
  const double p0 = g.momentum_of(alpha);
  const double u = (x - x0) / g.delta;
  const double envelope = std::pow(kPi, -0.25) / std::sqrt(g.delta);
  return envelope * std::exp(cplx{-0.5 * u * u, p0 * x / g.hbar - 0.5 * p0 * x0 / g.hbar});
}

cplx position_amplitude(const SingleModeState& state, double x) {
  cplx sum{0.0, 0.0};
  for (const auto& c : state.components()) sum += c.weight * coherent_wavefunction(state.geometry(), c.centers[0], x);
  return sum;
}

cplx position_amplitude(const BipartiteState& state, double x1, double x2) {
  cplx sum{0.0, 0.0};
  const auto& g = state.geometry();
  for (const auto& c : state.components()) {
    sum += c.weight * coherent_wavefunction(g, c.centers[0], x1) * coherent_wavefunction(g, c.centers[1], x2);
  }
  return sum;
}

}  // namespace compass
