#pragma once

// Run configuration for the command-line tool. The file format is JSON.
// Unknown keys are rejected; every omitted field takes the default listed in
// README.md and is written back out, resolved, by resolved_json().

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "compass/coherent_state.hpp"
#include "compass/protocol.hpp"
#include "compass/wigner.hpp"
#include "json.hpp"

namespace compass {

enum class TileScan { quarter_period, center };

struct TilesConfig {
  TileScan scan = TileScan::quarter_period;
  /// Slice half-width in units of the expected zero spacing of each axis.
  double half_width_spacings = 3.0;
  std::size_t n = 97;
};

struct HamiltonianConfig {
  CouplingKind kind = CouplingKind::position;
  /// Coherent amplitude of the ground-doublet displacement.
  double displacement = 0.0;
  /// Coupling prefactor implied by (or, if given, implying) the displacement.
  double strength = 0.0;
  double detuning = 0.0;
  double trap_phase = 1.5 * kPi;
  double lamb_dicke = 0.1;
  double omega = 1.0;
  std::size_t fock_cutoff = 60;
  std::size_t levels = 6;

  HamiltonianSpec spec(const ModeGeometry& geometry) const;
};

struct SweepConfig {
  double s_min = 0.0;
  double s_max = 0.0;
  std::size_t n = 241;
};

struct RunConfig {
  ModeGeometry geometry;
  cplx alpha{0.0, 0.0};
  CompassCoefficients coefficients;
  WignerMethod method = WignerMethod::analytic;
  std::string output = "compass_out";
  SliceBinding binding;
  GridSpec first_grid;
  GridSpec second_grid;
  QuadratureSpec quadrature;
  TilesConfig tiles;
  HamiltonianConfig hamiltonian;
  SweepConfig sweep;
  JointStateReading reading = JointStateReading::table;
  bool heatmap = true;
};

/// Throws ConfigError (with the offending field path) on malformed text or
/// schema violations.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Every field, defaults included, in a fixed key order.
nlohmann::ordered_json resolved_json(const RunConfig& cfg);

WignerMethod parse_method(std::string_view name);

}  // namespace compass
