#include "compass/metrology.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

namespace compass {

cplx shift_amplitude(const ModeGeometry& g, cplx alpha, double s) {
  if (alpha.real() == 0.0) throw InvalidArgument("sensitivity needs x0 != 0 (Re alpha = 0)");
  const double sign = alpha.real() > 0.0 ? 1.0 : -1.0;
  return {0.0, kSqrt2 * g.delta * s * sign};
}

double perturbed_overlap(const BipartiteState& state, cplx alpha, double s) {
  const cplx gamma = shift_amplitude(state.geometry(), alpha, s);
  return std::norm(inner_product(state, displace(state, gamma, gamma)));
}

double shift_envelope(const ModeGeometry& g, cplx alpha, double s) {
  return std::exp(-2.0 * std::norm(shift_amplitude(g, alpha, s)));
}

double expected_frequency(const ModeGeometry& g, cplx alpha) { return 4.0 * std::abs(g.position_of(alpha)); }

SensitivityCurve sensitivity_sweep(const BipartiteState& state, cplx alpha, double s_min, double s_max,
                                   std::size_t n) {
  if (n < 32) throw InvalidArgument("sensitivity sweep needs n >= 32");
  if (!(s_min < s_max)) throw InvalidArgument("sensitivity sweep needs s_min < s_max");
  const double freq = expected_frequency(state.geometry(), alpha);
  if ((s_max - s_min) * freq / (2.0 * kPi) < 2.0) {
    throw InvalidArgument("sensitivity sweep must span at least two expected fringes");
  }
  SensitivityCurve curve;
  curve.s.resize(n);
  curve.overlap.resize(n);
  curve.envelope.resize(n);
  const double h = (s_max - s_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = s_min + h * static_cast<double>(i);
    curve.s[i] = s;
    curve.overlap[i] = perturbed_overlap(state, alpha, s);
    curve.envelope[i] = shift_envelope(state.geometry(), alpha, s);
  }
  return curve;
}

double CosFit::operator()(double s) const { return offset + amplitude * std::cos(frequency * s + phase); }

namespace {

struct LinearFit {
  Eigen::Vector3d coeffs;
  double cost;
};

LinearFit solve_linear(const std::vector<double>& s, const std::vector<double>& y, const std::vector<double>& w,
                       double omega) {
  const auto n = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    a(i, 0) = w[k];
    a(i, 1) = w[k] * std::cos(omega * s[k]);
    a(i, 2) = w[k] * std::sin(omega * s[k]);
    b(i) = w[k] * y[k];
  }
  LinearFit fit;
  fit.coeffs = a.colPivHouseholderQr().solve(b);
  fit.cost = (a * fit.coeffs - b).squaredNorm();
  return fit;
}

double weighted_cost(const std::vector<double>& s, const std::vector<double>& y, const std::vector<double>& w,
                     const Eigen::Vector4d& p) {
  double cost = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = w[i] * (y[i] - p(0) - p(1) * std::cos(p(3) * s[i]) - p(2) * std::sin(p(3) * s[i]));
    cost += r * r;
  }
  return cost;
}

}  // namespace

CosFit fit_cosine(const std::vector<double>& s, const std::vector<double>& y, const std::vector<double>& weights) {
  if (s.size() != y.size()) throw InvalidArgument("fit_cosine: s and y differ in length");
  if (!weights.empty() && weights.size() != s.size()) throw InvalidArgument("fit_cosine: weights differ in length");
  if (s.size() < 16) throw NumericalError("fit_cosine: need at least 16 samples");
  const std::vector<double> w = weights.empty() ? std::vector<double>(s.size(), 1.0) : weights;

  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*hi - *lo < 1e-9) throw NumericalError("fit_cosine: flat curve");

  const double range = s.back() - s.front();
  if (!(range > 0.0)) throw InvalidArgument("fit_cosine: abscissae must increase");
  std::vector<double> gaps(s.size() - 1);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) gaps[i] = s[i + 1] - s[i];
  std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2), gaps.end());
  const double nyquist = kPi / gaps[gaps.size() / 2];

  // Periodogram of the weighted, mean-removed samples, oversampled 8x.
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  double mean = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) mean += w[i] * y[i];
  mean /= wsum;
  const double step = 2.0 * kPi / (8.0 * range);
  double best_omega = step;
  double best_power = -1.0;
  for (double omega = step; omega <= nyquist; omega += step) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      re += w[i] * (y[i] - mean) * std::cos(omega * s[i]);
      im += w[i] * (y[i] - mean) * std::sin(omega * s[i]);
    }
    const double power = re * re + im * im;
    if (power > best_power) {
      best_power = power;
      best_omega = omega;
    }
  }

  const double half_lobe = kPi / range;
  std::uintmax_t iterations = 200;
  const auto refined = boost::math::tools::brent_find_minima(
      [&](double omega) { return solve_linear(s, y, w, omega).cost; }, std::max(best_omega - half_lobe, 0.5 * step),
      best_omega + half_lobe, 40, iterations);

  const auto lin = solve_linear(s, y, w, refined.first);
  Eigen::Vector4d p(lin.coeffs(0), lin.coeffs(1), lin.coeffs(2), refined.first);
  double cost = weighted_cost(s, y, w, p);

  // Gauss-Newton polish on (offset, c1, c2, omega).
  const auto n = static_cast<Eigen::Index>(s.size());
  for (int iter = 0; iter < 50; ++iter) {
    Eigen::MatrixXd jac(n, 4);
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const double c = std::cos(p(3) * s[k]);
      const double sn = std::sin(p(3) * s[k]);
      r(i) = w[k] * (y[k] - p(0) - p(1) * c - p(2) * sn);
      jac(i, 0) = w[k];
      jac(i, 1) = w[k] * c;
      jac(i, 2) = w[k] * sn;
      jac(i, 3) = w[k] * s[k] * (-p(1) * sn + p(2) * c);
    }
    const Eigen::Vector4d delta = jac.colPivHouseholderQr().solve(r);
    const Eigen::Vector4d trial = p + delta;
    const double trial_cost = weighted_cost(s, y, w, trial);
    if (!(trial_cost <= cost)) break;
    const bool small = delta.norm() <= 1e-15 * (1.0 + p.norm());
    p = trial;
    cost = trial_cost;
    if (small) break;
  }
  if (!p.allFinite()) throw NumericalError("fit_cosine: polish diverged");

  CosFit fit;
  fit.offset = p(0);
  fit.amplitude = std::hypot(p(1), p(2));
  fit.frequency = p(3);
  fit.phase = std::atan2(-p(2), p(1));
  if (fit.phase <= -kPi) fit.phase += 2.0 * kPi;
  double wsq = 0.0;
  for (double v : w) wsq += v * v;
  fit.residual_rms = std::sqrt(cost / wsq);

  if (fit.amplitude < 1e-9) throw NumericalError("fit_cosine: flat curve (amplitude < 1e-9)");
  const double fringes = fit.frequency * range / (2.0 * kPi);
  if (fringes < 2.0) throw NumericalError("fit_cosine: fewer than two fringes in range");
  if (static_cast<double>(s.size()) / fringes < 8.0) throw NumericalError("fit_cosine: fewer than 8 samples per fringe");
  return fit;
}

CosFit fit_cosine(const SensitivityCurve& curve) {
  std::vector<double> y(curve.s.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(curve.envelope[i] > 0.0)) throw NumericalError("fit_cosine: envelope underflow");
    y[i] = curve.overlap[i] / curve.envelope[i];
  }
  return fit_cosine(curve.s, y, curve.envelope);
}

namespace {

std::size_t first_dip(const SensitivityCurve& curve) {
  for (std::size_t i = 1; i + 1 < curve.s.size(); ++i) {
    if (curve.s[i] <= 0.0) continue;
    const double v = curve.overlap[i];
    if (v < 0.05 && v <= curve.overlap[i - 1] && v <= curve.overlap[i + 1]) {
      if (!curve.envelope.empty() && curve.envelope[i] < kEnvelopeFloor)
        throw NumericalError("first overlap minimum lies where the envelope has decayed to " +
                             std::to_string(curve.envelope[i]) + " (< 0.1): envelope-dominated, no interference zero");
      return i;
    }
  }
  throw NumericalError("overlap never drops below 0.05 in the swept range");
}

}  // namespace

double first_overlap_zero(const SensitivityCurve& curve, const BipartiteState& state, cplx alpha) {
  const std::size_t i = first_dip(curve);
  std::uintmax_t iterations = 200;
  const auto r = boost::math::tools::brent_find_minima(
      [&](double s) { return perturbed_overlap(state, alpha, s); }, curve.s[i - 1], curve.s[i + 1], 40, iterations);
  return r.first;
}

double first_overlap_zero(const SensitivityCurve& curve) {
  const std::size_t i = first_dip(curve);
  const double h = curve.s[i + 1] - curve.s[i];
  const double y0 = curve.overlap[i - 1];
  const double y1 = curve.overlap[i];
  const double y2 = curve.overlap[i + 1];
  const double denom = y0 - 2.0 * y1 + y2;
  if (!(denom > 0.0)) return curve.s[i];
  return curve.s[i] + 0.5 * h * (y0 - y2) / denom;
}

}  // namespace compass
