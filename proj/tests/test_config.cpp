#include <cmath>
#include <string>

#include "compass/config.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace compass;
using oracle::cplx;

namespace {

std::string path_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal configuration takes the defaults") {
  const auto cfg = parse_config(R"({"alpha": 3, "coefficients": {"values": [1, 1, 1, 1]}})");
  CHECK(cfg.alpha == cplx{3.0, 0.0});
  CHECK(cfg.geometry == ModeGeometry{});
  CHECK(cfg.coefficients.basis == CoefficientBasis::coherent);
  CHECK(cfg.method == WignerMethod::analytic);
  CHECK(cfg.binding.first == Axis::x1);
  CHECK(cfg.binding.second == Axis::p1);
  CHECK(cfg.first_grid.n == 101);
  CHECK(cfg.quadrature.half_width == 26.0);
  CHECK(cfg.quadrature.points == 256);
  CHECK(cfg.tiles.scan == TileScan::quarter_period);
  CHECK(cfg.hamiltonian.displacement == 3.0);
  CHECK(cfg.hamiltonian.strength == doctest::Approx(3.0 * std::sqrt(2.0)));
  CHECK(cfg.hamiltonian.fock_cutoff == 72);
  CHECK(cfg.sweep.s_max == doctest::Approx(3 * 2 * oracle::pi / (4 * 3 * std::sqrt(2.0))));
  CHECK(cfg.reading == JointStateReading::table);
  CHECK(cfg.heatmap);
}

TEST_CASE("resolved configuration round-trips") {
  const auto cfg = parse_config(R"({"alpha": [2, 0.5], "coefficients": {"basis": "cat", "values": [1, [0, 0.5], {"re": 0, "im": 0}, 0.25]},
                                   "geometry": {"hbar": 0.5, "delta": 2}, "method": "numeric",
                                   "slice": {"axes": ["x2", "p1"], "fixed": {"x1": 0.1, "p2": -0.3}}})");
  const auto text = resolved_json(cfg).dump();
  const auto again = parse_config(text);
  CHECK(resolved_json(again).dump() == text);
  CHECK(again.coefficients.basis == CoefficientBasis::cat);
  CHECK(again.coefficients.values[1] == cplx{0.0, 0.5});
  CHECK(again.binding.first == Axis::x2);
  CHECK(again.binding.fixed.p2 == -0.3);
  CHECK(again.method == WignerMethod::numeric);
  CHECK(again.geometry.hbar == 0.5);
  for (const char* key : {"geometry", "alpha", "coefficients", "method", "output", "slice", "quadrature", "tiles",
                          "hamiltonian", "sweep", "protocol", "heatmap"})
    CHECK(resolved_json(cfg).contains(key));
}

TEST_CASE("errors name the offending field") {
  CHECK(path_of(R"({"alpha": 3, "coefficients": {"values": [1, 1, 1, 1]}, "geometry": {"delta": -1}})") ==
        "geometry.delta");
  CHECK(path_of(R"({"alpha": 3, "coefficients": {"values": [1, 1, 1, 1]}, "tiles": {"scna": "center"}})") ==
        "tiles.scna");
  CHECK(path_of(R"({"coefficients": {"values": [1, 1, 1, 1]}})") == "alpha");
  CHECK(path_of(R"({"alpha": 3, "coefficients": {"values": [1, 1, 1]}})") == "coefficients.values");
  CHECK(path_of(R"({"alpha": 3, "coefficients": {"values": [1, 1, 1, 1]}, "method": "exact"})") == "method");
  CHECK(path_of(R"({"alpha": 3, "coefficients": {"values": [1, 1, 1, 1]},
                   "hamiltonian": {"displacement": 2, "strength": 1}})")
            .rfind("hamiltonian", 0) == 0);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/compass.json"), ConfigError);
}

TEST_CASE("hamiltonian block") {
  const auto cfg = parse_config(R"({"alpha": 3, "coefficients": {"values": [1, 1, 1, 1]},
                                   "hamiltonian": {"kind": "momentum", "displacement": 2, "levels": 8}})");
  const auto spec = cfg.hamiltonian.spec(cfg.geometry);
  CHECK(spec.kind == CouplingKind::momentum);
  CHECK(displacement_of(spec) == doctest::Approx(2.0));
  CHECK(cfg.hamiltonian.fock_cutoff == 60);
  CHECK_THROWS_AS(parse_config(R"({"alpha": 3, "coefficients": {"values": [1, 1, 1, 1]}, "hamiltonian": {"levels": 2}})"),
                  ConfigError);
}

TEST_CASE("method names") {
  CHECK(parse_method("mesoscopic") == WignerMethod::mesoscopic);
  CHECK_THROWS(parse_method("fast"));
}

}  // TEST_SUITE
