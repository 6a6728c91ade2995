#include "compass/mesoscopic.hpp"

#include <cmath>

namespace compass {

namespace {

cplx weight_at(const BipartiteState& state, cplx c1, cplx c2) {
  for (const auto& comp : state.components()) {
    if (std::abs(comp.centers[0] - c1) <= kMergeTolerance && std::abs(comp.centers[1] - c2) <= kMergeTolerance)
      return comp.weight;
  }
  return {0.0, 0.0};
}

}  // namespace

MesoscopicModel::MesoscopicModel(const CompassCoefficients& coeffs, cplx alpha, ModeGeometry geometry)
    : geometry_(geometry), alpha_(alpha) {
  geometry_.validate();
  if (alpha == cplx{0.0, 0.0}) throw DegenerateStateError("mesoscopic model needs alpha != 0");
  const BipartiteState state = make_compass_bipartite(coeffs, alpha, geometry_);
  const cplx ia = cplx{0.0, 1.0} * alpha;
  const double prefactor = 1.0 / ((kPi * geometry_.hbar) * (kPi * geometry_.hbar));

  for (int f = 0; f < 2; ++f) {
    const cplx first = f == 0 ? alpha : ia;
    const cplx second = f == 0 ? ia : alpha;
    auto& t = families_[static_cast<std::size_t>(f)];
    for (double s1 : {1.0, -1.0}) {
      for (double s2 : {1.0, -1.0}) {
        const cplx z = weight_at(state, s1 * first, s2 * second) *
                       std::conj(weight_at(state, -s1 * first, -s2 * second)) * prefactor;
        t.cc += z.real();
        t.ss += s1 * s2 * z.real();
        t.sc += s1 * z.imag();
        t.cs += -s2 * z.imag();
      }
    }
  }

  const double x0 = kSqrt2 * geometry_.delta * std::abs(alpha);
  regime_ratio_ = x0 * x0 / (geometry_.delta * geometry_.delta);
  in_regime_ = regime_ratio_ >= 9.0;
}

std::array<double, 2> MesoscopicModel::family_phases(int family, const PhaseSpacePoint& pt) const {
  if (family != 0 && family != 1) throw InvalidArgument("family index must be 0 or 1");
  const cplx ia = cplx{0.0, 1.0} * alpha_;
  const cplx first = family == 0 ? alpha_ : ia;
  const cplx second = family == 0 ? ia : alpha_;
  const double k = 2.0 / geometry_.hbar;
  // u = 4 Im(zeta1 conj(first)), v = -4 Im(zeta2 conj(second)); the pair
  // term of centers s1 first, s2 second then carries exp(i (s2 v - s1 u)).
  return {k * (pt.p1 * geometry_.position_of(first) - pt.x1 * geometry_.momentum_of(first)),
          k * (pt.x2 * geometry_.momentum_of(second) - pt.p2 * geometry_.position_of(second))};
}

double MesoscopicModel::evaluate(const PhaseSpacePoint& pt) const {
  const cplx z1 = geometry_.amplitude_at(pt.x1, pt.p1);
  const cplx z2 = geometry_.amplitude_at(pt.x2, pt.p2);
  const double envelope = std::exp(-2.0 * std::norm(z1) - 2.0 * std::norm(z2));
  double sum = 0.0;
  for (int f = 0; f < 2; ++f) {
    const auto [u, v] = family_phases(f, pt);
    const auto& t = families_[static_cast<std::size_t>(f)];
    sum += t.cc * std::cos(u) * std::cos(v) + t.cs * std::cos(u) * std::sin(v) + t.sc * std::sin(u) * std::cos(v) +
           t.ss * std::sin(u) * std::sin(v);
  }
  return envelope * sum;
}

SliceCoefficients MesoscopicModel::slice_coefficients(double x2, double p2) const {
  const PhaseSpacePoint pt{0.0, 0.0, x2, p2};
  const double v1 = family_phases(0, pt)[1];
  const double v2 = family_phases(1, pt)[1];
  const auto& f1 = families_[0];
  const auto& f2 = families_[1];
  SliceCoefficients b;
  b.b1 = f1.cc * std::cos(v1) + f1.cs * std::sin(v1);
  b.b4 = f1.sc * std::cos(v1) + f1.ss * std::sin(v1);
  b.b2 = f2.cc * std::cos(v2) + f2.cs * std::sin(v2);
  b.b3 = f2.sc * std::cos(v2) + f2.ss * std::sin(v2);
  return b;
}

std::array<double, 4> MesoscopicModel::a_coefficients() const {
  return {families_[0].cc, families_[1].cc, families_[0].cs, families_[1].sc};
}

double mesoscopic_wigner(const CompassCoefficients& coeffs, cplx alpha, const PhaseSpacePoint& pt,
                         ModeGeometry geometry) {
  return MesoscopicModel(coeffs, alpha, geometry).evaluate(pt);
}

WignerSlice mesoscopic_slice(const MesoscopicModel& model, const SliceBinding& binding, const GridSpec& first,
                             const GridSpec& second) {
  return wigner_slice([&](const PhaseSpacePoint& pt) { return model.evaluate(pt); }, binding, first, second,
                      WignerMethod::mesoscopic);
}

}  // namespace compass
