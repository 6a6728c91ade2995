#pragma once

// Generation protocol: displaced-oscillator Hamiltonians in a truncated Fock
// basis, their ground doublets, the delayed-coupling rotation, and the
// internal-state measurement that projects out bipartite compass states.
//
// Basis ordering on internal (x) Fock space: index = q * (N + 1) + n with
// q = 0 for |g> and q = 1 for |e>. |+-> = (|g> +- |e>) / sqrt2.

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "compass/coherent_state.hpp"

namespace compass {

enum class CouplingKind { position, momentum };

std::string_view coupling_name(CouplingKind kind);

/// H = (detuning / 2) sigma_z + hbar omega (a^dag a + 1/2) + coupling, with
///   position: lambda [cos(phi) - eta sin(phi)] sigma_x x,  lambda = strength / eta
///   momentum: strength sigma_x p
/// so that phi = 3 pi / 2 gives strength * sigma_x x exactly. The mass is
/// fixed by the geometry: m = hbar / (omega delta^2).
struct HamiltonianSpec {
  CouplingKind kind = CouplingKind::position;
  double detuning = 0.0;
  double strength = 0.0;
  double trap_phase = 1.5 * kPi;
  double lamb_dicke = 0.1;
  double omega = 1.0;
  ModeGeometry geometry{};
  std::size_t fock_cutoff = 60;

  void validate() const;
  double mass() const { return geometry.hbar / (omega * geometry.delta * geometry.delta); }
  /// Prefactor of sigma_x x (position) or sigma_x p (momentum).
  double effective_coupling() const;
  std::size_t dimension() const { return 2 * (fock_cutoff + 1); }
};

/// Position-coupling strength whose ground doublet is displaced by the
/// coherent amplitude `alpha`: c = sqrt2 delta m omega^2 alpha.
double position_strength_for(double alpha, double omega, const ModeGeometry& g);
/// Momentum-coupling strength d = c / (m omega) for the same displacement.
double momentum_strength_for(double alpha, double omega, const ModeGeometry& g);
/// Coherent amplitude of the displacement produced by a spec's coupling.
double displacement_of(const HamiltonianSpec& spec);

/// max(60, ceil(8 |alpha|^2)).
std::size_t default_fock_cutoff(double alpha);

struct TruncatedOperator {
  Eigen::MatrixXcd matrix;
  bool hermitian = false;

  double hermiticity_defect() const;
};

TruncatedOperator hamiltonian_matrix(const HamiltonianSpec& spec);

/// Ascending eigenvalues of the lowest `count` levels.
std::vector<double> lowest_levels(const TruncatedOperator& op, std::size_t count);

struct GroundDoublet {
  std::array<double, 2> energies{};
  /// Columns are the two orthonormal eigenvectors.
  Eigen::MatrixXcd vectors;
  double third_level = 0.0;
  double splitting() const { return energies[1] - energies[0]; }
  double gap() const { return third_level - energies[1]; }
};

/// Throws NumericalError if the eigensolver fails or the operator is not
/// flagged hermitian.
GroundDoublet ground_doublet(const TruncatedOperator& op);

struct FockVector {
  Eigen::VectorXcd amplitudes;
  /// 1 - sum |c_n|^2 for n <= N.
  double tail = 0.0;
};

/// e^{-|alpha|^2/2} alpha^n / sqrt(n!) for n = 0..N. Throws InvalidArgument
/// when N < 8 |alpha|^2.
FockVector coherent_fock_vector(cplx alpha, std::size_t cutoff);

/// 0.5 * ||U^dag V||_F^2 for two orthonormal 2-column frames.
double subspace_fidelity(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v);

enum class DoubletPairing {
  /// |+> with -alpha (or -i alpha): the minimum of the sigma_x = +1 branch.
  derived,
  /// |+> with +alpha (or +i alpha).
  literal,
};

/// Orthonormalized frame spanned by |+>|s beta> and |->|-s beta> where
/// beta = alpha (position) or i alpha (momentum) and s = -1 for the derived
/// pairing, +1 for the literal one.
Eigen::MatrixXcd predicted_doublet(CouplingKind kind, double alpha, std::size_t cutoff, DoubletPairing pairing);

/// exp(-i theta a^dag a) acting on both internal branches.
Eigen::MatrixXcd rotation_operator(double theta, std::size_t cutoff);

struct RotationCheck {
  double theta_star = 0.0;
  double fidelity_star = 0.0;
  double fidelity_plus_half_pi = 0.0;
  double fidelity_minus_half_pi = 0.0;
  double fidelity_quarter_pi = 0.0;
};

/// Compares the rotated position-coupled doublet with the momentum-coupled
/// one at the same displacement. Throws NumericalError if neither +-pi/2
/// reaches fidelity 1 - 1e-10.
RotationCheck rotation_convention_check(double alpha, std::size_t cutoff, double omega = 1.0,
                                        ModeGeometry geometry = {});

// ---------------------------------------------------------------------------
// Internal states and measurement.

struct QubitState {
  cplx g{1.0, 0.0};
  cplx e{0.0, 0.0};

  static QubitState ground() { return {{1.0, 0.0}, {0.0, 0.0}}; }
  static QubitState excited() { return {{0.0, 0.0}, {1.0, 0.0}}; }
  static QubitState plus() { return {{1.0 / kSqrt2, 0.0}, {1.0 / kSqrt2, 0.0}}; }
  static QubitState minus() { return {{1.0 / kSqrt2, 0.0}, {-1.0 / kSqrt2, 0.0}}; }
};

cplx qubit_overlap(const QubitState& bra, const QubitState& ket);

struct HybridComponent {
  cplx weight;
  QubitState q1;
  QubitState q2;
  std::array<cplx, 2> centers;
};

class HybridState {
 public:
  HybridState(ModeGeometry geometry, std::vector<HybridComponent> components);

  const ModeGeometry& geometry() const { return geometry_; }
  const std::vector<HybridComponent>& components() const { return components_; }
  double norm_squared() const;
  /// Throws DegenerateStateError on a null state.
  HybridState normalized() const;

 private:
  ModeGeometry geometry_;
  std::vector<HybridComponent> components_;
};

enum class JointStateReading {
  /// Internal states fixed by requiring all four measurement rows to hold:
  /// a: |++>, b: |++>, c: -|-+>, d: -|+->.
  table,
  /// Each motional center carries the internal state of its ground doublet:
  /// |+> with alpha and i alpha, |-> with -alpha and -i alpha.
  ground_doublet,
};

std::string_view reading_name(JointStateReading reading);

/// Symmetrized internal (x) motional state over the eight compass terms.
HybridState build_joint_state(const CompassCoefficients& coeffs, cplx alpha, ModeGeometry geometry = {},
                              JointStateReading reading = JointStateReading::table);

enum class MeasurementOutcome { EE, GG, BellPlus, BellMinus };

inline constexpr std::array<MeasurementOutcome, 4> kAllOutcomes = {
    MeasurementOutcome::EE, MeasurementOutcome::GG, MeasurementOutcome::BellPlus, MeasurementOutcome::BellMinus};

std::string_view outcome_name(MeasurementOutcome outcome);

/// Amplitudes of the outcome vector over (gg, ge, eg, ee).
std::array<cplx, 4> outcome_vector(MeasurementOutcome outcome);

struct Projection {
  std::optional<BipartiteState> state;
  double probability = 0.0;
};

/// Normalized motional state left after the outcome, and its probability.
/// Outcomes with probability below 1e-14 return no state.
Projection project_internal(const HybridState& hybrid, MeasurementOutcome outcome);

/// Motional state expected for each outcome:
///   EE: {a, b, c, d}   GG: {a, b, -c, -d}   BellPlus: {a, b, 0, 0}   BellMinus: {0, 0, c, -d}
/// Throws DegenerateStateError when the row has no surviving term.
BipartiteState table_state(const CompassCoefficients& coeffs, cplx alpha, MeasurementOutcome outcome,
                           ModeGeometry geometry = {});

}  // namespace compass
