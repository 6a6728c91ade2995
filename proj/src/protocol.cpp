#include "compass/protocol.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace compass {

std::string_view coupling_name(CouplingKind kind) {
  return kind == CouplingKind::position ? "position" : "momentum";
}

void HamiltonianSpec::validate() const {
  geometry.validate();
  if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidArgument("hamiltonian: omega must be > 0");
  if (!std::isfinite(detuning)) throw InvalidArgument("hamiltonian: detuning must be finite");
  if (!std::isfinite(strength)) throw InvalidArgument("hamiltonian: strength must be finite");
  if (!std::isfinite(trap_phase)) throw InvalidArgument("hamiltonian: trap_phase must be finite");
  if (!(lamb_dicke > 0.0) || !std::isfinite(lamb_dicke))
    throw InvalidArgument("hamiltonian: lamb_dicke must be > 0");
  if (fock_cutoff < 8) throw InvalidArgument("hamiltonian: fock_cutoff must be >= 8");
}

double HamiltonianSpec::effective_coupling() const {
  if (kind == CouplingKind::momentum) return strength;
  const double lambda = strength / lamb_dicke;
  return lambda * (std::cos(trap_phase) - lamb_dicke * std::sin(trap_phase));
}

double position_strength_for(double alpha, double omega, const ModeGeometry& g) {
  const double m = g.hbar / (omega * g.delta * g.delta);
  return kSqrt2 * g.delta * m * omega * omega * alpha;
}

double momentum_strength_for(double alpha, double omega, const ModeGeometry& g) {
  const double m = g.hbar / (omega * g.delta * g.delta);
  return position_strength_for(alpha, omega, g) / (m * omega);
}

double displacement_of(const HamiltonianSpec& spec) {
  const double k = spec.effective_coupling();
  const double m = spec.mass();
  if (spec.kind == CouplingKind::position) return k / (kSqrt2 * spec.geometry.delta * m * spec.omega * spec.omega);
  return k * m * spec.geometry.delta / (kSqrt2 * spec.geometry.hbar);
}

std::size_t default_fock_cutoff(double alpha) {
  return std::max<std::size_t>(60, static_cast<std::size_t>(std::ceil(8.0 * alpha * alpha)));
}

double TruncatedOperator::hermiticity_defect() const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff(); }

namespace {

Eigen::MatrixXcd annihilation(std::size_t cutoff) {
  const auto n = static_cast<Eigen::Index>(cutoff + 1);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

}  // namespace

TruncatedOperator hamiltonian_matrix(const HamiltonianSpec& spec) {
  spec.validate();
  const auto& g = spec.geometry;
  const auto n = static_cast<Eigen::Index>(spec.fock_cutoff + 1);
  const Eigen::MatrixXcd a = annihilation(spec.fock_cutoff);
  const Eigen::MatrixXcd ad = a.adjoint();

  Eigen::MatrixXcd quad;
  if (spec.kind == CouplingKind::position) {
    quad = (g.delta / kSqrt2) * (a + ad);
  } else {
    quad = cplx{0.0, g.hbar / (kSqrt2 * g.delta)} * (ad - a);
  }

  Eigen::MatrixXcd osc = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) osc(k, k) = g.hbar * spec.omega * (static_cast<double>(k) + 0.5);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const double k = spec.effective_coupling();

  TruncatedOperator op;
  op.matrix.resize(2 * n, 2 * n);
  op.matrix.topLeftCorner(n, n) = osc - 0.5 * spec.detuning * id;
  op.matrix.bottomRightCorner(n, n) = osc + 0.5 * spec.detuning * id;
  op.matrix.topRightCorner(n, n) = k * quad;
  op.matrix.bottomLeftCorner(n, n) = k * quad;
  op.hermitian = op.hermiticity_defect() <= 1e-12;
  return op;
}

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solve(const TruncatedOperator& op) {
  if (!op.hermitian) throw NumericalError("eigensolve requested for a non-hermitian operator");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.matrix);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian eigensolver did not converge");
  return solver;
}

}  // namespace

std::vector<double> lowest_levels(const TruncatedOperator& op, std::size_t count) {
  const auto solver = solve(op);
  const auto& ev = solver.eigenvalues();
  count = std::min<std::size_t>(count, static_cast<std::size_t>(ev.size()));
  return {ev.data(), ev.data() + count};
}

GroundDoublet ground_doublet(const TruncatedOperator& op) {
  const auto solver = solve(op);
  GroundDoublet d;
  d.energies = {solver.eigenvalues()(0), solver.eigenvalues()(1)};
  d.third_level = solver.eigenvalues()(2);
  d.vectors = solver.eigenvectors().leftCols(2);
  return d;
}

FockVector coherent_fock_vector(cplx alpha, std::size_t cutoff) {
  if (static_cast<double>(cutoff) < 8.0 * std::norm(alpha)) {
    throw InvalidArgument("Fock cutoff " + std::to_string(cutoff) + " is below 8|alpha|^2");
  }
  FockVector out;
  out.amplitudes.resize(static_cast<Eigen::Index>(cutoff + 1));
  cplx c = std::exp(-0.5 * std::norm(alpha));
  out.amplitudes(0) = c;
  for (std::size_t n = 1; n <= cutoff; ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    out.amplitudes(static_cast<Eigen::Index>(n)) = c;
  }
  out.tail = std::max(0.0, 1.0 - out.amplitudes.squaredNorm());
  return out;
}

double subspace_fidelity(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
  return 0.5 * (u.adjoint() * v).squaredNorm();
}

namespace {

Eigen::VectorXcd embed(const QubitState& q, const Eigen::VectorXcd& fock) {
  const auto n = fock.size();
  Eigen::VectorXcd out(2 * n);
  out.head(n) = q.g * fock;
  out.tail(n) = q.e * fock;
  return out;
}

}  // namespace

Eigen::MatrixXcd predicted_doublet(CouplingKind kind, double alpha, std::size_t cutoff, DoubletPairing pairing) {
  const cplx beta = kind == CouplingKind::position ? cplx{alpha, 0.0} : cplx{0.0, alpha};
  const double s = pairing == DoubletPairing::derived ? -1.0 : 1.0;
  const auto plus = coherent_fock_vector(s * beta, cutoff).amplitudes;
  const auto minus = coherent_fock_vector(-s * beta, cutoff).amplitudes;
  Eigen::MatrixXcd frame(2 * plus.size(), 2);
  frame.col(0) = embed(QubitState::plus(), plus).normalized();
  frame.col(1) = embed(QubitState::minus(), minus).normalized();
  return frame;
}

Eigen::MatrixXcd rotation_operator(double theta, std::size_t cutoff) {
  const auto n = static_cast<Eigen::Index>(cutoff + 1);
  Eigen::VectorXcd diag(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    diag(k) = diag(k + n) = std::polar(1.0, -theta * static_cast<double>(k));
  }
  return diag.asDiagonal();
}

RotationCheck rotation_convention_check(double alpha, std::size_t cutoff, double omega, ModeGeometry geometry) {
  HamiltonianSpec pos;
  pos.kind = CouplingKind::position;
  pos.omega = omega;
  pos.geometry = geometry;
  pos.fock_cutoff = cutoff;
  pos.strength = position_strength_for(alpha, omega, geometry);
  HamiltonianSpec mom = pos;
  mom.kind = CouplingKind::momentum;
  mom.strength = momentum_strength_for(alpha, omega, geometry);

  const auto vp = ground_doublet(hamiltonian_matrix(pos)).vectors;
  const auto vm = ground_doublet(hamiltonian_matrix(mom)).vectors;
  auto fidelity = [&](double theta) { return subspace_fidelity(rotation_operator(theta, cutoff) * vp, vm); };

  RotationCheck check;
  check.fidelity_plus_half_pi = fidelity(0.5 * kPi);
  check.fidelity_minus_half_pi = fidelity(-0.5 * kPi);
  check.fidelity_quarter_pi = fidelity(0.25 * kPi);
  if (check.fidelity_minus_half_pi >= check.fidelity_plus_half_pi) {
    check.theta_star = -0.5 * kPi;
    check.fidelity_star = check.fidelity_minus_half_pi;
  } else {
    check.theta_star = 0.5 * kPi;
    check.fidelity_star = check.fidelity_plus_half_pi;
  }
  if (check.fidelity_star < 1.0 - 1e-10) {
    throw NumericalError("neither rotation by +pi/2 nor -pi/2 maps the doublets (best fidelity " +
                         std::to_string(check.fidelity_star) + ")");
  }
  return check;
}

// ---------------------------------------------------------------------------

cplx qubit_overlap(const QubitState& bra, const QubitState& ket) {
  return std::conj(bra.g) * ket.g + std::conj(bra.e) * ket.e;
}

HybridState::HybridState(ModeGeometry geometry, std::vector<HybridComponent> components)
    : geometry_(geometry), components_(std::move(components)) {
  geometry_.validate();
  std::erase_if(components_, [](const HybridComponent& c) { return c.weight == cplx{0.0, 0.0}; });
  if (components_.empty()) throw DegenerateStateError("hybrid state has no components");
}

double HybridState::norm_squared() const {
  cplx sum{0.0, 0.0};
  for (const auto& j : components_) {
    for (const auto& k : components_) {
      sum += std::conj(j.weight) * k.weight * qubit_overlap(j.q1, k.q1) * qubit_overlap(j.q2, k.q2) *
             coherent_overlap(k.centers[0], j.centers[0]) * coherent_overlap(k.centers[1], j.centers[1]);
    }
  }
  return sum.real();
}

HybridState HybridState::normalized() const {
  double scale = 0.0;
  for (const auto& c : components_) scale += std::abs(c.weight);
  const double n2 = norm_squared();
  if (!(n2 > kDegeneracyThreshold * scale * scale)) throw DegenerateStateError("hybrid state norm vanishes");
  auto comps = components_;
  for (auto& c : comps) c.weight /= std::sqrt(n2);
  return HybridState(geometry_, std::move(comps));
}

std::string_view reading_name(JointStateReading reading) {
  return reading == JointStateReading::table ? "table" : "ground_doublet";
}

HybridState build_joint_state(const CompassCoefficients& coeffs, cplx alpha, ModeGeometry geometry,
                              JointStateReading reading) {
  if (!coeffs.any_nonzero()) throw DegenerateStateError("all compass coefficients are zero");
  const auto coherent = coeffs.basis == CoefficientBasis::coherent ? coeffs : convert_coeffs(coeffs, alpha);
  const auto& [a, b, c, d] = coherent.values;
  const cplx ia = cplx{0.0, 1.0} * alpha;
  const auto P = QubitState::plus();
  const auto M = QubitState::minus();

  std::vector<HybridComponent> comps;
  if (reading == JointStateReading::table) {
    comps = {
        {a, P, P, {alpha, ia}},   {a, P, P, {ia, alpha}},   {b, P, P, {-alpha, -ia}}, {b, P, P, {-ia, -alpha}},
        {-c, M, P, {alpha, -ia}}, {-c, M, P, {-ia, alpha}}, {-d, P, M, {-alpha, ia}}, {-d, P, M, {ia, -alpha}},
    };
  } else {
    auto q = [&](cplx center) {
      return std::abs(center - alpha) < kMergeTolerance || std::abs(center - ia) < kMergeTolerance ? P : M;
    };
    const std::array<std::pair<cplx, std::array<cplx, 2>>, 8> terms = {{
        {a, {alpha, ia}},
        {a, {ia, alpha}},
        {b, {-alpha, -ia}},
        {b, {-ia, -alpha}},
        {c, {alpha, -ia}},
        {c, {-ia, alpha}},
        {d, {-alpha, ia}},
        {d, {ia, -alpha}},
    }};
    for (const auto& [w, centers] : terms) comps.push_back({w, q(centers[0]), q(centers[1]), centers});
  }
  try {
    return HybridState(geometry, std::move(comps)).normalized();
  } catch (const DegenerateStateError& e) {
    throw DegenerateStateError(std::string("joint state is degenerate: ") + e.what());
  }
}

std::string_view outcome_name(MeasurementOutcome outcome) {
  switch (outcome) {
    case MeasurementOutcome::EE: return "EE";
    case MeasurementOutcome::GG: return "GG";
    case MeasurementOutcome::BellPlus: return "BellPlus";
    case MeasurementOutcome::BellMinus: return "BellMinus";
  }
  return "?";
}

std::array<cplx, 4> outcome_vector(MeasurementOutcome outcome) {
  const double r = 1.0 / kSqrt2;
  switch (outcome) {
    case MeasurementOutcome::EE: return {0.0, 0.0, 0.0, 1.0};
    case MeasurementOutcome::GG: return {1.0, 0.0, 0.0, 0.0};
    case MeasurementOutcome::BellPlus: return {0.0, r, r, 0.0};
    case MeasurementOutcome::BellMinus: return {0.0, r, -r, 0.0};
  }
  return {};
}

Projection project_internal(const HybridState& hybrid, MeasurementOutcome outcome) {
  const auto o = outcome_vector(outcome);
  std::vector<Component<2>> comps;
  for (const auto& c : hybrid.components()) {
    const cplx amp = std::conj(o[0]) * c.q1.g * c.q2.g + std::conj(o[1]) * c.q1.g * c.q2.e +
                     std::conj(o[2]) * c.q1.e * c.q2.g + std::conj(o[3]) * c.q1.e * c.q2.e;
    const cplx w = c.weight * amp;
    if (w != cplx{0.0, 0.0}) comps.push_back({w, c.centers});
  }
  Projection out;
  if (comps.empty()) return out;
  BipartiteState motional(hybrid.geometry(), std::move(comps));
  out.probability = motional.norm_squared() / hybrid.norm_squared();
  if (out.probability < 1e-14) {
    out.probability = std::max(0.0, out.probability);
    return out;
  }
  out.state = motional.normalized();
  return out;
}

BipartiteState table_state(const CompassCoefficients& coeffs, cplx alpha, MeasurementOutcome outcome,
                           ModeGeometry geometry) {
  const auto coherent = coeffs.basis == CoefficientBasis::coherent ? coeffs : convert_coeffs(coeffs, alpha);
  const auto& [a, b, c, d] = coherent.values;
  CompassCoefficients row;
  switch (outcome) {
    case MeasurementOutcome::EE: row.values = {a, b, c, d}; break;
    case MeasurementOutcome::GG: row.values = {a, b, -c, -d}; break;
    case MeasurementOutcome::BellPlus: row.values = {a, b, 0.0, 0.0}; break;
    case MeasurementOutcome::BellMinus: row.values = {0.0, 0.0, c, -d}; break;
  }
  return make_compass_bipartite(row, alpha, geometry);
}

}  // namespace compass
