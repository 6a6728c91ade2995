#include "compass/wigner.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

namespace compass {

std::string_view axis_name(Axis axis) {
  switch (axis) {
    case Axis::x1: return "x1";
    case Axis::p1: return "p1";
    case Axis::x2: return "x2";
    case Axis::p2: return "p2";
  }
  return "?";
}

Axis parse_axis(std::string_view name) {
  if (name == "x1") return Axis::x1;
  if (name == "p1") return Axis::p1;
  if (name == "x2") return Axis::x2;
  if (name == "p2") return Axis::p2;
  throw InvalidArgument("unknown axis '" + std::string(name) + "'");
}

double& axis_ref(PhaseSpacePoint& pt, Axis axis) {
  switch (axis) {
    case Axis::x1: return pt.x1;
    case Axis::p1: return pt.p1;
    case Axis::x2: return pt.x2;
    case Axis::p2: return pt.p2;
  }
  return pt.x1;
}

double axis_value(const PhaseSpacePoint& pt, Axis axis) {
  auto copy = pt;
  return axis_ref(copy, axis);
}

void GridSpec::validate() const {
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) throw InvalidArgument("grid: need min < max");
  if (n < 2) throw InvalidArgument("grid: need n >= 2");
}

void SliceBinding::validate() const {
  if (first == second) throw InvalidArgument("slice binding: free axes must differ");
}

PhaseSpacePoint SliceBinding::point(double first_value, double second_value) const {
  PhaseSpacePoint pt = fixed;
  axis_ref(pt, first) = first_value;
  axis_ref(pt, second) = second_value;
  return pt;
}

std::string_view method_name(WignerMethod method) {
  switch (method) {
    case WignerMethod::analytic: return "analytic";
    case WignerMethod::numeric: return "numeric";
    case WignerMethod::mesoscopic: return "mesoscopic";
  }
  return "?";
}

double WignerSlice::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void QuadratureSpec::validate() const {
  if (!(half_width > 0.0)) throw InvalidArgument("quadrature: half_width must be > 0");
  if (points < 16 || points % 2 != 0) throw InvalidArgument("quadrature: points must be even and >= 16");
}

namespace {

constexpr double kResidueLimit = 1e-9;

// Exponent of <beta|alpha> exp(-2 (zeta - alpha)(conj zeta - conj beta)).
cplx pair_exponent(cplx alpha, cplx beta, cplx zeta) {
  return -0.5 * std::norm(alpha) - 0.5 * std::norm(beta) + std::conj(beta) * alpha -
         2.0 * (zeta - alpha) * (std::conj(zeta) - std::conj(beta));
}

double checked_real(cplx sum) {
  if (std::abs(sum.imag()) > kResidueLimit) {
    throw NumericalError("Wigner pair sum has imaginary residue " + std::to_string(sum.imag()));
  }
  return sum.real();
}

}  // namespace

cplx wigner_pair_sum(const SingleModeState& state, double x, double p) {
  const auto& g = state.geometry();
  const cplx zeta = g.amplitude_at(x, p);
  cplx sum{0.0, 0.0};
  for (const auto& j : state.components()) {
    for (const auto& k : state.components()) {
      sum += j.weight * std::conj(k.weight) * std::exp(pair_exponent(j.centers[0], k.centers[0], zeta));
    }
  }
  return sum / (kPi * g.hbar);
}

cplx wigner_pair_sum(const BipartiteState& state, const PhaseSpacePoint& pt) {
  const auto& g = state.geometry();
  const cplx z1 = g.amplitude_at(pt.x1, pt.p1);
  const cplx z2 = g.amplitude_at(pt.x2, pt.p2);
  cplx sum{0.0, 0.0};
  for (const auto& j : state.components()) {
    for (const auto& k : state.components()) {
      const cplx e = pair_exponent(j.centers[0], k.centers[0], z1) + pair_exponent(j.centers[1], k.centers[1], z2);
      sum += j.weight * std::conj(k.weight) * std::exp(e);
    }
  }
  const double norm = kPi * g.hbar;
  return sum / (norm * norm);
}

double wigner_analytic(const SingleModeState& state, double x, double p) {
  return checked_real(wigner_pair_sum(state, x, p));
}

double wigner_analytic(const BipartiteState& state, const PhaseSpacePoint& pt) {
  return checked_real(wigner_pair_sum(state, pt));
}

// ---------------------------------------------------------------------------
// Numeric route: W = (2 pi hbar)^-d  int conj(psi(x + a/2)) psi(x - a/2) e^{i p a / hbar} da

namespace {

struct TrapezoidAxis {
  std::vector<double> nodes;
  std::vector<double> weights;
};

TrapezoidAxis trapezoid_axis(const QuadratureSpec& quad) {
  quad.validate();
  TrapezoidAxis axis;
  const std::size_t m = quad.points;
  const double h = 2.0 * quad.half_width / static_cast<double>(m - 1);
  axis.nodes.resize(m);
  axis.weights.assign(m, h);
  for (std::size_t i = 0; i < m; ++i) axis.nodes[i] = -quad.half_width + h * static_cast<double>(i);
  axis.weights.front() = axis.weights.back() = 0.5 * h;
  return axis;
}

template <std::size_t Modes>
double peak_bound(const Superposition<Modes>& state) {
  double wsum = 0.0;
  for (const auto& c : state.components()) wsum += std::abs(c.weight);
  const double per_mode = 1.0 / (std::sqrt(kPi) * state.geometry().delta);
  return wsum * wsum * std::pow(per_mode, static_cast<double>(Modes));
}

void check_edge(double edge, double bound) {
  if (edge > 1e-16 * bound) {
    throw NumericalError("quadrature window too small: edge integrand " + std::to_string(edge) +
                         " exceeds 1e-16 of peak bound " + std::to_string(bound));
  }
}

}  // namespace

double wigner_numeric(const SingleModeState& state, double x, double p, const QuadratureSpec& quad) {
  const auto axis = trapezoid_axis(quad);
  const auto& g = state.geometry();
  const std::size_t m = axis.nodes.size();
  cplx sum{0.0, 0.0};
  double edge = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double a = axis.nodes[i];
    const cplx integrand = std::conj(position_amplitude(state, x + 0.5 * a)) * position_amplitude(state, x - 0.5 * a);
    if (i == 0 || i + 1 == m) edge = std::max(edge, std::abs(integrand));
    sum += axis.weights[i] * integrand * std::polar(1.0, p * a / g.hbar);
  }
  check_edge(edge, peak_bound(state));
  return sum.real() / (2.0 * kPi * g.hbar);
}

double wigner_numeric(const BipartiteState& state, const PhaseSpacePoint& pt, const QuadratureSpec& quad) {
  const auto axis = trapezoid_axis(quad);
  const auto& g = state.geometry();
  const auto comps = state.components();
  const Eigen::Index m = static_cast<Eigen::Index>(axis.nodes.size());
  const Eigen::Index k = static_cast<Eigen::Index>(comps.size());

  // Component wavefunctions at x +- a/2 on each mode.
  Eigen::MatrixXcd f1p(m, k), f1m(m, k), f2p(m, k), f2m(m, k);
  Eigen::VectorXcd w(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto& comp = comps[static_cast<std::size_t>(c)];
    w(c) = comp.weight;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double half = 0.5 * axis.nodes[static_cast<std::size_t>(i)];
      f1p(i, c) = coherent_wavefunction(g, comp.centers[0], pt.x1 + half);
      f1m(i, c) = coherent_wavefunction(g, comp.centers[0], pt.x1 - half);
      f2p(i, c) = coherent_wavefunction(g, comp.centers[1], pt.x2 + half);
      f2m(i, c) = coherent_wavefunction(g, comp.centers[1], pt.x2 - half);
    }
  }
  const Eigen::MatrixXcd psi_plus = f1p * w.asDiagonal() * f2p.transpose();
  const Eigen::MatrixXcd psi_minus = f1m * w.asDiagonal() * f2m.transpose();

  Eigen::VectorXcd phase1(m), phase2(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    phase1(i) = axis.weights[idx] * std::polar(1.0, pt.p1 * axis.nodes[idx] / g.hbar);
    phase2(i) = axis.weights[idx] * std::polar(1.0, pt.p2 * axis.nodes[idx] / g.hbar);
  }

  cplx sum{0.0, 0.0};
  double edge = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    cplx column{0.0, 0.0};
    for (Eigen::Index i = 0; i < m; ++i) {
      const cplx integrand = std::conj(psi_plus(i, j)) * psi_minus(i, j);
      if (i == 0 || j == 0 || i + 1 == m || j + 1 == m) edge = std::max(edge, std::abs(integrand));
      column += phase1(i) * integrand;
    }
    sum += phase2(j) * column;
  }
  check_edge(edge, peak_bound(state));
  const double norm = 2.0 * kPi * g.hbar;
  return sum.real() / (norm * norm);
}

NumericWigner wigner_numeric_checked(const BipartiteState& state, const PhaseSpacePoint& pt,
                                     const QuadratureSpec& quad) {
  const double coarse = wigner_numeric(state, pt, quad);
  QuadratureSpec fine = quad;
  fine.points = 2 * quad.points;
  const double refined = wigner_numeric(state, pt, fine);
  return {refined, std::abs(refined - coarse)};
}

WignerSlice wigner_slice(const PhaseSpaceFunction& w, const SliceBinding& binding, const GridSpec& first,
                         const GridSpec& second, WignerMethod provenance) {
  binding.validate();
  first.validate();
  second.validate();
  WignerSlice slice{binding, first, second, {}, provenance};
  slice.values.resize(first.n * second.n);
  for (std::size_t j = 0; j < second.n; ++j) {
    for (std::size_t i = 0; i < first.n; ++i) {
      const double v = w(binding.point(first.at(i), second.at(j)));
      if (!std::isfinite(v)) throw NumericalError("non-finite Wigner value in slice");
      slice.values[j * first.n + i] = v;
    }
  }
  return slice;
}

WignerSlice wigner_slice(const BipartiteState& state, const SliceBinding& binding, const GridSpec& first,
                         const GridSpec& second, WignerMethod method, const QuadratureSpec& quad) {
  switch (method) {
    case WignerMethod::analytic:
      return wigner_slice([&](const PhaseSpacePoint& pt) { return wigner_analytic(state, pt); }, binding, first,
                          second, method);
    case WignerMethod::numeric:
      return wigner_slice([&](const PhaseSpacePoint& pt) { return wigner_numeric(state, pt, quad); }, binding,
                          first, second, method);
    case WignerMethod::mesoscopic:
      break;
  }
  throw InvalidArgument("mesoscopic slices are built from compass parameters (see mesoscopic.hpp)");
}

// ---------------------------------------------------------------------------
// Separable integration. For one mode and one pair (alpha = c_j, beta = c_k),
// with zeta = u + i v the exponent splits as
//   C0 - 2(u - ar)(u - br) - 2i u (bi - ai)  -  2(v - ai)(v - bi) - 2i v (ar - br)
// where C0 = -|a|^2/2 - |b|^2/2 + conj(b) a - 2i (ai br - ar bi).

namespace {

struct ModePairFactors {
  cplx constant;
  cplx alpha;
  cplx beta;
};

ModePairFactors mode_pair(cplx alpha, cplx beta) {
  const cplx c0 = -0.5 * std::norm(alpha) - 0.5 * std::norm(beta) + std::conj(beta) * alpha -
                  2.0 * cplx{0.0, 1.0} * (alpha.imag() * beta.real() - alpha.real() * beta.imag());
  return {c0, alpha, beta};
}

cplx position_factor(const ModePairFactors& f, const ModeGeometry& g, double x) {
  const double u = x / (kSqrt2 * g.delta);
  return std::exp(cplx{-2.0 * (u - f.alpha.real()) * (u - f.beta.real()), -2.0 * u * (f.beta.imag() - f.alpha.imag())});
}

cplx momentum_factor(const ModePairFactors& f, const ModeGeometry& g, double p) {
  const double v = p * g.delta / (kSqrt2 * g.hbar);
  return std::exp(cplx{-2.0 * (v - f.alpha.imag()) * (v - f.beta.imag()), -2.0 * v * (f.alpha.real() - f.beta.real())});
}

template <typename F>
cplx trapezoid(const GridSpec& grid, F&& f) {
  const double h = grid.spacing();
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double wgt = (i == 0 || i + 1 == grid.n) ? 0.5 * h : h;
    sum += wgt * f(grid.at(i));
  }
  return sum;
}

// Every component center +- 6 sigma inside the grid, and sampling fine enough
// that the fastest pair fringe is resolved well inside the Nyquist limit.
template <std::size_t Modes>
void check_coverage(const Superposition<Modes>& state, const GridSpec& grid, std::size_t mode, bool momentum,
                    std::string_view label) {
  grid.validate();
  const auto& g = state.geometry();
  const double sigma = momentum ? g.hbar / (kSqrt2 * g.delta) : g.delta / kSqrt2;
  double max_k = 0.0;
  for (const auto& j : state.components()) {
    const cplx a = j.centers[mode];
    const double center = momentum ? g.momentum_of(a) : g.position_of(a);
    if (center - 6.0 * sigma < grid.min || center + 6.0 * sigma > grid.max) {
      throw NumericalError("grid for " + std::string(label) + " does not cover 6 sigma around every component");
    }
    for (const auto& k : state.components()) {
      const cplx b = k.centers[mode];
      const double kk = momentum ? kSqrt2 * g.delta * std::abs(a.real() - b.real()) / g.hbar
                                 : kSqrt2 * std::abs(a.imag() - b.imag()) / g.delta;
      max_k = std::max(max_k, kk);
    }
  }
  if (2.0 * kPi / grid.spacing() - max_k < 8.0 / sigma) {
    throw NumericalError("grid for " + std::string(label) + " is too coarse for the interference fringes");
  }
}

}  // namespace

double integrate_wigner(const BipartiteState& state, const std::array<GridSpec, 4>& grids) {
  check_coverage(state, grids[0], 0, false, "x1");
  check_coverage(state, grids[1], 0, true, "p1");
  check_coverage(state, grids[2], 1, false, "x2");
  check_coverage(state, grids[3], 1, true, "p2");
  const auto& g = state.geometry();
  cplx total{0.0, 0.0};
  for (const auto& j : state.components()) {
    for (const auto& k : state.components()) {
      const auto m1 = mode_pair(j.centers[0], k.centers[0]);
      const auto m2 = mode_pair(j.centers[1], k.centers[1]);
      const cplx ix1 = trapezoid(grids[0], [&](double x) { return position_factor(m1, g, x); });
      const cplx ip1 = trapezoid(grids[1], [&](double p) { return momentum_factor(m1, g, p); });
      const cplx ix2 = trapezoid(grids[2], [&](double x) { return position_factor(m2, g, x); });
      const cplx ip2 = trapezoid(grids[3], [&](double p) { return momentum_factor(m2, g, p); });
      total += j.weight * std::conj(k.weight) * std::exp(m1.constant + m2.constant) * ix1 * ip1 * ix2 * ip2;
    }
  }
  const double norm = kPi * g.hbar;
  return total.real() / (norm * norm);
}

double integrate_wigner(const SingleModeState& state, const GridSpec& x, const GridSpec& p) {
  check_coverage(state, x, 0, false, "x");
  check_coverage(state, p, 0, true, "p");
  const auto& g = state.geometry();
  cplx total{0.0, 0.0};
  for (const auto& j : state.components()) {
    for (const auto& k : state.components()) {
      const auto m = mode_pair(j.centers[0], k.centers[0]);
      const cplx ix = trapezoid(x, [&](double v) { return position_factor(m, g, v); });
      const cplx ip = trapezoid(p, [&](double v) { return momentum_factor(m, g, v); });
      total += j.weight * std::conj(k.weight) * std::exp(m.constant) * ix * ip;
    }
  }
  return total.real() / (kPi * g.hbar);
}

std::vector<double> marginal(const BipartiteState& state, Axis axis, const std::array<GridSpec, 4>& grids) {
  check_coverage(state, grids[0], 0, false, "x1");
  check_coverage(state, grids[1], 0, true, "p1");
  check_coverage(state, grids[2], 1, false, "x2");
  check_coverage(state, grids[3], 1, true, "p2");
  const auto& g = state.geometry();
  const auto target = static_cast<std::size_t>(axis);
  const GridSpec& out_grid = grids[target];
  std::vector<cplx> acc(out_grid.n, cplx{0.0, 0.0});

  for (const auto& j : state.components()) {
    for (const auto& k : state.components()) {
      const std::array<ModePairFactors, 2> modes{mode_pair(j.centers[0], k.centers[0]),
                                                 mode_pair(j.centers[1], k.centers[1])};
      auto factor = [&](std::size_t ax, double v) {
        const auto& f = modes[ax / 2];
        return ax % 2 == 0 ? position_factor(f, g, v) : momentum_factor(f, g, v);
      };
      cplx scale = j.weight * std::conj(k.weight) * std::exp(modes[0].constant + modes[1].constant);
      for (std::size_t ax = 0; ax < 4; ++ax) {
        if (ax == target) continue;
        scale *= trapezoid(grids[ax], [&](double v) { return factor(ax, v); });
      }
      for (std::size_t i = 0; i < out_grid.n; ++i) acc[i] += scale * factor(target, out_grid.at(i));
    }
  }
  const double norm = kPi * g.hbar;
  std::vector<double> out(out_grid.n);
  for (std::size_t i = 0; i < out_grid.n; ++i) out[i] = acc[i].real() / (norm * norm);
  return out;
}

std::vector<double> marginal(const SingleModeState& state, Axis axis, const GridSpec& x, const GridSpec& p) {
  if (axis != Axis::x1 && axis != Axis::p1) throw InvalidArgument("single-mode marginal axis must be x1 or p1");
  check_coverage(state, x, 0, false, "x");
  check_coverage(state, p, 0, true, "p");
  const auto& g = state.geometry();
  const bool keep_x = axis == Axis::x1;
  const GridSpec& out_grid = keep_x ? x : p;
  std::vector<cplx> acc(out_grid.n, cplx{0.0, 0.0});
  for (const auto& j : state.components()) {
    for (const auto& k : state.components()) {
      const auto m = mode_pair(j.centers[0], k.centers[0]);
      const cplx base = j.weight * std::conj(k.weight) * std::exp(m.constant);
      if (keep_x) {
        const cplx ip = trapezoid(p, [&](double v) { return momentum_factor(m, g, v); });
        for (std::size_t i = 0; i < x.n; ++i) acc[i] += base * ip * position_factor(m, g, x.at(i));
      } else {
        const cplx ix = trapezoid(x, [&](double v) { return position_factor(m, g, v); });
        for (std::size_t i = 0; i < p.n; ++i) acc[i] += base * ix * momentum_factor(m, g, p.at(i));
      }
    }
  }
  std::vector<double> out(out_grid.n);
  for (std::size_t i = 0; i < out_grid.n; ++i) out[i] = acc[i].real() / (kPi * g.hbar);
  return out;
}

double peak_magnitude(const BipartiteState& state) {
  const auto& g = state.geometry();
  double peak = std::abs(wigner_analytic(state, PhaseSpacePoint{}));
  for (const auto& c : state.components()) {
    const PhaseSpacePoint pt{g.position_of(c.centers[0]), g.momentum_of(c.centers[0]), g.position_of(c.centers[1]),
                             g.momentum_of(c.centers[1])};
    peak = std::max(peak, std::abs(wigner_analytic(state, pt)));
  }
  return peak;
}

}  // namespace compass
