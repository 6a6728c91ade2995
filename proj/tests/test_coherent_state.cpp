#include <cmath>
#include <random>

#include "compass/coherent_state.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace compass;
using oracle::cplx;

namespace {

BipartiteState product(const SingleModeState& a, const SingleModeState& b, cplx weight = 1.0) {
  std::vector<Component<2>> comps;
  for (const auto& ca : a.components())
    for (const auto& cb : b.components()) comps.push_back({weight * ca.weight * cb.weight, {ca.centers[0], cb.centers[0]}});
  return BipartiteState(a.geometry(), comps);
}

BipartiteState sum(const BipartiteState& a, const BipartiteState& b) {
  std::vector<Component<2>> comps(a.components().begin(), a.components().end());
  comps.insert(comps.end(), b.components().begin(), b.components().end());
  return BipartiteState(a.geometry(), comps);
}

}  // namespace

TEST_SUITE("coherent_state") {

TEST_CASE("coherent overlap matches position-space quadrature") {
  const double hbar = 0.7, delta = 1.3;
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const cplx a = oracle::random_disk(rng, 3.0), b = oracle::random_disk(rng, 3.0);
    const cplx q = oracle::trapezoid(-20.0, 20.0, 4001, [&](double x) {
      return std::conj(oracle::coherent_psi(hbar, delta, b, x)) * oracle::coherent_psi(hbar, delta, a, x);
    });
    CHECK(std::abs(coherent_overlap(a, b) - q) < 1e-12);
  }
  CHECK(std::abs(coherent_overlap({2.0, 0.0}, {2.0, 0.0}) - 1.0) < 1e-15);
  CHECK(std::abs(coherent_overlap({2.0, 0.0}, {-2.0, 0.0}) - std::exp(-8.0)) < 1e-18);
}

TEST_CASE("wavefunction agrees with the Gaussian wavepacket") {
  const ModeGeometry g{0.5, 0.8};
  for (double x : {-2.0, -0.3, 0.0, 1.1}) {
    const cplx alpha{1.2, -0.7};
    CHECK(std::abs(coherent_wavefunction(g, alpha, x) - oracle::coherent_psi(0.5, 0.8, alpha, x)) < 1e-14);
  }
  CHECK(std::abs(position_amplitude(vacuum(g), 0.0) - std::pow(oracle::pi, -0.25) / std::sqrt(0.8)) < 1e-15);
}

TEST_CASE("cat wavefunctions for real and imaginary amplitude") {
  const ModeGeometry g{1.0, 0.9};
  const double a = 1.7;
  const double x0 = std::sqrt(2.0) * g.delta * a;
  const double p0 = std::sqrt(2.0) * g.hbar * a / g.delta;
  const auto even = make_cat(a, Parity::even, g), odd = make_cat(a, Parity::odd, g);
  const auto even_i = make_cat(cplx{0.0, a}, Parity::even, g), odd_i = make_cat(cplx{0.0, a}, Parity::odd, g);
  for (double x = -4.0; x <= 4.0; x += 0.37) {
    CHECK(std::abs(position_amplitude(even, x) - oracle::cat_real(g.delta, x0, x, +1)) < 1e-13);
    CHECK(std::abs(position_amplitude(odd, x) - oracle::cat_real(g.delta, x0, x, -1)) < 1e-13);
    CHECK(std::abs(position_amplitude(even_i, x) - oracle::cat_imag(g.hbar, g.delta, p0, x, +1)) < 1e-13);
    CHECK(std::abs(position_amplitude(odd_i, x) - oracle::cat_imag(g.hbar, g.delta, p0, x, -1)) < 1e-13);
    CHECK(std::abs(position_amplitude(even, -x) - position_amplitude(even, x)) < 1e-14);
    CHECK(std::abs(position_amplitude(odd, -x) + position_amplitude(odd, x)) < 1e-14);
  }
}

TEST_CASE("cat states") {
  CHECK(fidelity(make_cat(0.0, Parity::even), vacuum()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(make_cat(0.0, Parity::odd), DegenerateStateError);
  const auto cat = make_cat(2.0, Parity::even);
  const double expected = (1.0 + std::exp(-8.0)) / std::sqrt(2.0 * (1.0 + std::exp(-8.0)));
  CHECK(std::abs(std::abs(inner_product(coherent_state(2.0), cat)) - expected) < 1e-14);
  CHECK(std::abs(inner_product(cat, make_cat(2.0, Parity::odd))) < 1e-15);
  CHECK(cat.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("single-mode compass norm agrees with quadrature") {
  const auto s = make_compass_single({2.3, 0.4});
  CHECK(s.size() == 4);
  const double q = oracle::trapezoid(-15.0, 15.0, 3001, [&](double x) { return std::norm(oracle::psi(s, x)); });
  CHECK(q == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(make_compass_single(0.0), DegenerateStateError);
}

TEST_CASE("canonicalization merges coinciding centers") {
  const SingleModeState merged(ModeGeometry{}, {{1.0, {1.0}}, {2.0, {-1.0}}, {0.5, {1.0}}, {0.0, {3.0}}});
  CHECK(merged.size() == 2);
  CHECK(merged.components()[0].weight == cplx{1.5, 0.0});
  const SingleModeState plain(ModeGeometry{}, {{1.5, {1.0}}, {2.0, {-1.0}}});
  CHECK(std::abs(inner_product(merged, plain) - plain.norm_squared()) < 1e-14);
  CHECK_THROWS_AS(SingleModeState(ModeGeometry{}, {{1.0, {1.0}}, {-1.0, {1.0}}}), DegenerateStateError);
}

TEST_CASE("inner product is conjugate symmetric and geometry checked") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto a = oracle::random_bipartite(rng, 8, 4.0), b = oracle::random_bipartite(rng, 8, 4.0);
    CHECK(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))) < 1e-14);
  }
  CHECK_THROWS_AS(inner_product(vacuum(), vacuum(ModeGeometry{1.0, 2.0})), InvalidArgument);
}

TEST_CASE("bipartite Gram sums agree with 2-D quadrature") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 6; ++t) {
    const auto s = oracle::random_bipartite(rng, 8, 4.0);
    const int n = 601;
    const double lo = -10.0, hi = 10.0, h = (hi - lo) / (n - 1);
    std::vector<cplx> row(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x1 = lo + h * i;
      const double inner = oracle::trapezoid(lo, hi, n, [&](double x2) { return std::norm(oracle::psi(s, x1, x2)); });
      total += (i == 0 || i == n - 1 ? 0.5 : 1.0) * inner;
    }
    CHECK(std::abs(total * h - s.norm_squared()) < 1e-8);
  }
}

TEST_CASE("bipartite compass construction") {
  const auto only_a = make_compass_bipartite(oracle::coeffs(1, 0, 0, 0), 2.0);
  CHECK(only_a.size() == 2);
  const auto full = make_compass_bipartite(oracle::uniform_coeffs(), 3.0);
  CHECK(full.size() == 8);
  CHECK(full.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(make_compass_bipartite(oracle::coeffs(0, 0, 0, 0), 3.0), DegenerateStateError);
  // all eight centers collapse onto the vacuum pair at alpha = 0
  const auto vac = make_compass_bipartite(oracle::coeffs(1, 1, 0, 0), 0.0);
  CHECK(vac.size() == 1);
  CHECK_THROWS_AS(make_compass_bipartite(oracle::coeffs(1, -1, 0, 0), 0.0), DegenerateStateError);
}

TEST_CASE("compass state is exchange symmetric") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const auto k = oracle::coeffs(oracle::random_weight(rng), oracle::random_weight(rng), oracle::random_weight(rng),
                                  oracle::random_weight(rng));
    const auto s = make_compass_bipartite(k, oracle::random_disk(rng, 3.5));
    std::vector<Component<2>> swapped;
    for (const auto& c : s.components()) swapped.push_back({c.weight, {c.centers[1], c.centers[0]}});
    CHECK(fidelity(s, BipartiteState(s.geometry(), swapped)) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("cat-basis coefficients build symmetrized cat products") {
  const cplx alpha{2.1, 0.3};
  const cplx ia = cplx{0.0, 1.0} * alpha;
  const auto cp = make_cat(alpha, Parity::even), cm = make_cat(alpha, Parity::odd);
  const auto ip = make_cat(ia, Parity::even), im = make_cat(ia, Parity::odd);
  auto sym = [](const SingleModeState& u, const SingleModeState& v) { return sum(product(u, v), product(v, u)); };

  const std::array<BipartiteState, 4> expected = {sym(cp, ip), sym(cm, im), sym(cp, im), sym(cm, ip)};
  for (std::size_t i = 0; i < 4; ++i) {
    CompassCoefficients k;
    k.basis = CoefficientBasis::cat;
    k.values[i] = 1.0;
    CHECK(fidelity(make_compass_bipartite(k, alpha), expected[i]) == doctest::Approx(1.0).epsilon(1e-12));
  }

  CompassCoefficients mixed;
  mixed.basis = CoefficientBasis::cat;
  mixed.values = {1.0, cplx{0.0, 0.5}, 0.0, 0.25};
  const auto direct = sum(sum(expected[0], expected[1].scaled(mixed.values[1])), expected[3].scaled(0.25));
  CHECK(fidelity(make_compass_bipartite(mixed, alpha), direct) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coefficient conversion round-trips") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 50; ++t) {
    CompassCoefficients k;
    for (auto& v : k.values) v = oracle::random_weight(rng);
    const cplx alpha = oracle::random_disk(rng, 4.0) + 0.05;
    const auto back = convert_coeffs(convert_coeffs(k, alpha), alpha);
    CHECK(back.basis == CoefficientBasis::coherent);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(back.values[i] - k.values[i]) < 1e-12);
  }
  // a = b with c = d = 0 only involves the symmetric products
  const auto cat = convert_coeffs(oracle::coeffs(1, 1, 0, 0), 2.0);
  CHECK(std::abs(cat.values[2]) < 1e-15);
  CHECK(std::abs(cat.values[3]) < 1e-15);
  CHECK_THROWS_AS(convert_coeffs(oracle::coeffs(1, 0, 0, 0), 0.0), DegenerateStateError);
}

TEST_CASE("sub-Planck admissibility") {
  CHECK(sub_planck_admissible(oracle::coeffs(1, 1, 0, 0)));
  CHECK(sub_planck_admissible(oracle::coeffs(0, 0, 1, 2)));
  CHECK_FALSE(sub_planck_admissible(oracle::coeffs(1, 0, 1, 0)));
  CHECK_FALSE(sub_planck_admissible(oracle::coeffs(1, 0, 0, 0)));
}

TEST_CASE("displacement is unitary and composes with the Weyl phase") {
  std::mt19937_64 rng(17);
  const ModeGeometry g{0.8, 1.1};
  CHECK(fidelity(displace(vacuum(g), {1.0, 2.0}), coherent_state({1.0, 2.0}, g)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(inner_product(coherent_state({1.0, 2.0}, g), displace(vacuum(g), {1.0, 2.0})) - 1.0) < 1e-14);
  for (int t = 0; t < 20; ++t) {
    const auto a = oracle::random_single(rng, 5, 3.0, g), b = oracle::random_single(rng, 5, 3.0, g);
    const cplx u = oracle::random_disk(rng, 2.0), v = oracle::random_disk(rng, 2.0);
    CHECK(std::abs(inner_product(displace(a, u), displace(b, u)) - inner_product(a, b)) < 1e-13);
    const cplx phase = std::exp((v * std::conj(u) - std::conj(v) * u) / 2.0);
    const auto twice = displace(displace(a, u), v);
    const auto once = displace(a, u + v).scaled(phase);
    CHECK(std::abs(inner_product(once, twice) - 1.0) < 1e-12);
    // a momentum kick multiplies the wavefunction by a plane wave
    const double k = oracle::random_disk(rng, 1.5).real();
    const double p = g.momentum_of(cplx{0.0, k});
    const auto kicked = displace(a, cplx{0.0, k});
    for (double x : {-1.0, 0.2, 1.4})
      CHECK(std::abs(position_amplitude(kicked, x) - std::exp(cplx{0.0, p * x / g.hbar}) * position_amplitude(a, x)) < 1e-13);
  }
}

TEST_CASE("rotation preserves inner products and the vacuum") {
  std::mt19937_64 rng(19);
  CHECK(fidelity(rotate(vacuum(), 0.9), vacuum()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rotate(coherent_state(2.0), oracle::pi / 2).components()[0].centers[0].imag() == doctest::Approx(-2.0));
  for (int t = 0; t < 10; ++t) {
    const auto a = oracle::random_bipartite(rng, 6, 3.0), b = oracle::random_bipartite(rng, 6, 3.0);
    const double th = oracle::random_disk(rng, 3.0).real();
    CHECK(std::abs(inner_product(rotate(a, th, RotatedModes::both), rotate(b, th, RotatedModes::both)) -
                   inner_product(a, b)) < 1e-13);
    CHECK(std::abs(inner_product(a, rotate(a, 2 * oracle::pi, RotatedModes::first)) - 1.0) < 1e-12);
  }
}

}  // TEST_SUITE
