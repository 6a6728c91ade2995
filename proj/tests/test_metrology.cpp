#include <cmath>
#include <random>

#include "compass/metrology.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace compass;
using oracle::cplx;
using oracle::pi;

namespace {

// |int int |psi|^2 exp(i k (x1 + x2)) dx1 dx2|^2 with k the momentum kick / hbar
double overlap_by_quadrature(const BipartiteState& s, double kick) {
  const double lo = -11.0, hi = 11.0;
  const int n = 441;
  const double h = (hi - lo) / (n - 1);
  cplx total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x1 = lo + h * i;
    const cplx inner = oracle::trapezoid(lo, hi, n, [&](double x2) {
      return std::norm(oracle::psi(s, x1, x2)) * std::exp(cplx{0.0, kick * (x1 + x2)});
    });
    total += (i == 0 || i == n - 1 ? 0.5 : 1.0) * inner;
  }
  return std::norm(total * h);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * double(i) / double(n - 1);
  return v;
}

}  // namespace

TEST_SUITE("metrology") {

TEST_CASE("shift amplitude and envelope") {
  const ModeGeometry g{0.7, 1.3};
  CHECK(shift_amplitude(g, 2.0, 0.5) == cplx{0.0, std::sqrt(2.0) * 1.3 * 0.5});
  CHECK(shift_amplitude(g, -2.0, 0.5) == cplx{0.0, -std::sqrt(2.0) * 1.3 * 0.5});
  CHECK_THROWS_AS(shift_amplitude(g, cplx{0.0, 2.0}, 0.5), InvalidArgument);
  CHECK(expected_frequency(g, 3.0) == doctest::Approx(4 * std::sqrt(2.0) * 1.3 * 3.0));
  const BipartiteState prod(g, {{1.0, {cplx{2.0, 0.0}, cplx{0.0, 2.0}}}});
  for (double s : {0.0, 0.1, 0.35}) CHECK(perturbed_overlap(prod, 2.0, s) == doctest::Approx(shift_envelope(g, 2.0, s)).epsilon(1e-13));
}

TEST_CASE("overlap agrees with position-space quadrature") {
  const auto c = make_compass_bipartite(oracle::coeffs(1.0, cplx{0.0, 1.0}, 0.5, cplx{0.3, -0.6}), 3.0);
  CHECK(perturbed_overlap(c, 3.0, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
  for (double s : {0.05, 0.1, 0.185, 0.3}) {
    // the shift is a momentum kick of 2 hbar s on each mode
    CHECK(std::abs(perturbed_overlap(c, 3.0, s) - overlap_by_quadrature(c, 2.0 * s)) < 1e-7);
  }
}

TEST_CASE("overlap is bounded by one") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 20; ++t) {
    const auto s = oracle::random_bipartite(rng, 8, 4.0);
    for (double x = 0.0; x < 1.0; x += 0.07) {
      const double o = perturbed_overlap(s, 1.0, x);
      CHECK(o >= 0.0);
      CHECK(o <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("sweep preconditions") {
  const auto c = make_compass_bipartite(oracle::uniform_coeffs(), 3.0);
  CHECK_THROWS_AS(sensitivity_sweep(c, 3.0, 0.0, 1.0, 16), InvalidArgument);
  CHECK_THROWS_AS(sensitivity_sweep(c, 3.0, 0.0, 0.2, 100), InvalidArgument);
  CHECK_THROWS_AS(sensitivity_sweep(c, cplx{0.0, 3.0}, 0.0, 1.0, 100), InvalidArgument);
  const auto curve = sensitivity_sweep(c, 3.0, 0.0, 1.0, 101);
  CHECK(curve.s.size() == 101);
  CHECK(curve.overlap[0] == doctest::Approx(1.0));
}

TEST_CASE("cosine fit of synthetic data") {
  const auto s = linspace(0.0, 3.0, 301);
  for (double phase : {0.0, 0.7, -2.5}) {
    std::vector<double> y;
    for (double v : s) y.push_back(0.3 + 0.6 * std::cos(10.0 * v + phase));
    const auto f = fit_cosine(s, y);
    CHECK(f.frequency == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(f.phase == doctest::Approx(phase).epsilon(1e-9));
    CHECK(f.amplitude == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(f.offset == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(f.residual_rms < 1e-9);
  }
  CHECK_THROWS_AS(fit_cosine(s, std::vector<double>(s.size(), 0.5)), NumericalError);
  std::vector<double> slow;
  for (double v : s) slow.push_back(std::cos(1.0 * v));
  CHECK_THROWS_AS(fit_cosine(s, slow), NumericalError);
}

TEST_CASE("fit is self-consistent") {
  const auto c = make_compass_bipartite(oracle::coeffs(1, 1, 0.4, 0.2), 3.0);
  const auto curve = sensitivity_sweep(c, 3.0, 0.0, 3 * 2 * pi / expected_frequency({}, 3.0), 241);
  const auto f = fit_cosine(curve);
  std::vector<double> y;
  for (double s : curve.s) y.push_back(f(s));
  const auto g = fit_cosine(curve.s, y);
  CHECK(std::abs(g.frequency - f.frequency) <= 1e-9 * f.frequency);
  CHECK(std::abs(g.phase - f.phase) <= 1e-9);
}

TEST_CASE("fringe frequency follows 4 x0") {
  for (double alpha : {2.0, 3.0, 4.0}) {
    const auto c = make_compass_bipartite(oracle::uniform_coeffs(), alpha);
    const double f0 = expected_frequency({}, alpha);
    const auto curve = sensitivity_sweep(c, alpha, 0.0, 3 * 2 * pi / f0, 241);
    const auto f = fit_cosine(curve);
    CHECK(f.frequency == doctest::Approx(f0).epsilon(0.01));
    CHECK(std::abs(f.phase) < 0.02);
  }
}

TEST_CASE("first zero of the overlap") {
  const auto s = linspace(0.0, 2.0, 401);
  SensitivityCurve synthetic{s, {}, {}};
  for (double v : s) synthetic.overlap.push_back(0.5 + 0.5 * std::cos(4.0 * v));
  CHECK(first_overlap_zero(synthetic) == doctest::Approx(pi / 4).epsilon(1e-4));

  const auto c = make_compass_bipartite(oracle::uniform_coeffs(), 3.0);
  const double f0 = expected_frequency({}, 3.0);
  const auto curve = sensitivity_sweep(c, 3.0, 0.0, 3 * 2 * pi / f0, 241);
  const auto fit = fit_cosine(curve);
  CHECK(first_overlap_zero(curve, c, 3.0) == doctest::Approx((pi - fit.phase) / fit.frequency).epsilon(0.02));

  const auto weak = make_compass_bipartite(oracle::uniform_coeffs(), 0.5);
  const double fw = expected_frequency({}, 0.5);
  const auto flat = sensitivity_sweep(weak, 0.5, 0.0, 3 * 2 * pi / fw, 241);
  CHECK_THROWS_AS(first_overlap_zero(flat, weak, 0.5), NumericalError);
}

}  // TEST_SUITE
