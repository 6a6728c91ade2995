#include <cmath>

#include "compass/tiles.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace compass;
using oracle::pi;

TEST_SUITE("tiles") {

TEST_CASE("zeros of a synthetic cosine product") {
  const double x0 = 3.0 * std::sqrt(2.0), p0 = x0;
  auto f = [&](const PhaseSpacePoint& pt) { return std::cos(2 * p0 * pt.x1) * std::cos(2 * x0 * pt.p1); };
  const GridSpec grid{-1.0, 1.0, 201};
  const SliceBinding b{Axis::x1, Axis::p1, {}};
  const auto slice = wigner_slice(f, b, grid, grid, WignerMethod::analytic);
  const auto zeros = find_zero_crossings(slice, {0.0, 0.0, f});
  REQUIRE(zeros.first.size() >= 4);
  const double z = pi / (4 * p0);
  bool found = false;
  for (double v : zeros.first) found |= std::abs(v - z) < 1e-12;
  CHECK(found);
  const auto m = tile_metrics(zeros, x0, p0, 1.0);
  CHECK(m.dx == doctest::Approx(pi / (2 * p0)).epsilon(1e-10));
  CHECK(m.dp == doctest::Approx(pi / (2 * x0)).epsilon(1e-10));
  CHECK(m.ratio_to_checkerboard == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.ratio_to_reference == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(m.reference_area == doctest::Approx(4 * pi * pi / (4 * x0 * p0)));
}

TEST_CASE("grid interpolation without refinement") {
  auto f = [](const PhaseSpacePoint& pt) { return std::sin(3.0 * pt.x1 + 0.4) + 0.0 * pt.p1; };
  const GridSpec grid{-2.0, 2.0, 401};
  const auto slice = wigner_slice(f, {Axis::x1, Axis::p1, {}}, grid, grid, WignerMethod::analytic);
  const auto zeros = find_zero_crossings(slice);
  REQUIRE(zeros.first.size() == 4);
  CHECK(zeros.second.empty());
  CHECK(zeros.first[1] == doctest::Approx(-0.4 / 3.0).epsilon(1e-4));
  CHECK_THROWS_AS(tile_metrics(zeros, 1.0, 1.0, 1.0), NumericalError);
}

TEST_CASE("a featureless slice has no zero lines") {
  const BipartiteState vv(ModeGeometry{}, {{1.0, {0.0, 0.0}}});
  const GridSpec grid{-1.0, 1.0, 21};
  const auto s = wigner_slice(vv, {Axis::x1, Axis::p1, {}}, grid, grid, WignerMethod::analytic);
  CHECK_THROWS_AS(find_zero_crossings(s), NumericalError);
}

TEST_CASE("compass zeros sit on the quarter-period lines") {
  const auto c = make_compass_bipartite(oracle::uniform_coeffs(), 3.0);
  const ModeGeometry g{};
  const double x0 = compass_x0(g, 3.0), p0 = compass_p0(g, 3.0);
  const double dx = expected_spacing(Axis::x1, g, 3.0), dp = expected_spacing(Axis::p1, g, 3.0);
  CHECK(dx == doctest::Approx(pi / (2 * p0)));
  const GridSpec gx{-3 * dx, 3 * dx, 97}, gp{-3 * dp, 3 * dp, 97};
  const SliceBinding b{Axis::x1, Axis::p1, {}};
  const auto slice = wigner_slice(c, b, gx, gp, WignerMethod::analytic);
  const auto f = [&](const PhaseSpacePoint& pt) { return wigner_analytic(c, pt); };

  CHECK_THROWS_AS(find_zero_crossings(slice, {0.0, 0.0, f}), NumericalError);

  const auto zeros = find_zero_crossings(slice, {dp / 2, dx / 2, f});
  bool hit = false;
  for (double v : zeros.first) hit |= std::abs(std::abs(v) - pi / (4 * p0)) < 1e-6;
  CHECK(hit);
  const auto m = tile_metrics(zeros, x0, p0, 1.0);
  CHECK(m.dx == doctest::Approx(dx).epsilon(1e-3));
  CHECK(m.dp == doctest::Approx(dp).epsilon(1e-3));
  CHECK(m.ratio_to_checkerboard == doctest::Approx(1.0).epsilon(2e-3));

  // the sign flips across each detected zero
  for (double z : zeros.first) {
    const double left = wigner_analytic(c, {z - dx / 4, dp / 2, 0, 0});
    const double right = wigner_analytic(c, {z + dx / 4, dp / 2, 0, 0});
    CHECK(left * right < 0.0);
  }
}

TEST_CASE("tile area scales as 1 / alpha^2") {
  auto area = [](double alpha) {
    const auto c = make_compass_bipartite(oracle::uniform_coeffs(), alpha);
    const ModeGeometry g{};
    const double dx = expected_spacing(Axis::x1, g, alpha), dp = expected_spacing(Axis::p1, g, alpha);
    const GridSpec gx{-3 * dx, 3 * dx, 97}, gp{-3 * dp, 3 * dp, 97};
    const auto f = [&](const PhaseSpacePoint& pt) { return wigner_analytic(c, pt); };
    const auto slice = wigner_slice(c, {Axis::x1, Axis::p1, {}}, gx, gp, WignerMethod::analytic);
    return tile_metrics(find_zero_crossings(slice, {dp / 2, dx / 2, f}), compass_x0(g, alpha), compass_p0(g, alpha), 1.0).area;
  };
  const double a2 = area(2.0), a4 = area(4.0);
  CHECK(a2 / a4 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("checkerboard probe") {
  const auto full = make_compass_bipartite(oracle::coeffs(1, 1, 0, 0), 3.0);
  const auto single = make_compass_bipartite(oracle::coeffs(1, 0, 0, 0), 3.0);
  const auto p = probe_checkerboard(full, 3.0);
  CHECK(p.checkerboard);
  CHECK(p.min_value < -p.threshold);
  CHECK(p.max_value > p.threshold);
  CHECK_FALSE(probe_checkerboard(single, 3.0).checkerboard);
}

}  // TEST_SUITE
