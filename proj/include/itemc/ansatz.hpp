// Imaginary-time-mimicking ansatz construction.
//
// One pass of the algorithm applies a layer of single-qubit R_y rotations
// (one per field term h_i, angle known in closed form) followed by one
// two-qubit YZ+ZY gate per coupling term J_ij, in a configurable edge order.
// Each two-qubit gate's angles maximize the overlap between the gate-evolved
// state and the exact imaginary-time image exp(-tau J_ij Z_i Z_j)|psi>; the
// overlap is a closed-form function of seven one- and two-qubit Pauli
// expectations of the current state, so the maximization is purely classical.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "itemc/instance.hpp"
#include "itemc/rng.hpp"
#include "itemc/statevector.hpp"

namespace itemc {

enum class OrderingKind {
  original,
  ascending_j,
  descending_j,
  ascending_abs_j,
  descending_abs_j,
};

std::string to_string(OrderingKind kind);
OrderingKind ordering_kind_from_string(const std::string& s);

struct GateOrdering {
  std::string label;             // one of the five kinds, or "random"
  std::vector<int> permutation;  // bijection on edge indices
};

/// The five orderings: original, ascending J, descending J, ascending |J|,
/// descending |J|. Sort ties are broken by ascending original edge index.
std::array<GateOrdering, 5> gate_orderings(const IsingInstance& inst);

GateOrdering make_ordering(const IsingInstance& inst, OrderingKind kind);

/// Seeded Fisher-Yates shuffle of the edge indices, labeled "random".
GateOrdering random_ordering(const IsingInstance& inst, std::uint64_t seed);

/// Exact rotation angle carrying the single-qubit state at angle phi (in
/// [0, pi]) to the normalized image of exp(-tau h Z): theta = phi' - phi
/// with tan(phi'/2) = exp(2 tau h) tan(phi/2). At phi = pi/2 this reduces to
/// 2 arctan(-exp(-2 tau h)) + pi/2. Pinned qubits (phi in {0, pi}) get 0.
double single_qubit_angle(double h, double tau, double phi);

struct SingleQubitMoments {
  double x = 0.0, y = 0.0, z = 0.0;
};

struct TwoQubitMoments {
  double zz = 0.0;  // <Z_i Z_j>
  double yz = 0.0;  // <Y_i Z_j>
  double zy = 0.0;  // <Z_i Y_j>
  double xi = 0.0;  // <X_i>
  double xj = 0.0;  // <X_j>
  double xx = 0.0;  // <X_i X_j>
  double yy = 0.0;  // <Y_i Y_j>
};

/// Overlap <psi| exp(-tau_eff Z) R_y(theta) |psi> as a function of the
/// state's Pauli moments (real part; the imaginary part vanishes on
/// real-amplitude states where <Y> = 0).
double single_qubit_cost(double theta, const SingleQubitMoments& m, double tau_eff);

/// Overlap <psi| exp(-tau_eff Z_i Z_j) U_ij(theta0, theta1) |psi>, real part.
/// On real-amplitude states the <YZ>/<ZY> moments vanish and this is the
/// full value.
double two_qubit_cost(double theta0, double theta1, const TwoQubitMoments& m,
                      double tau_eff);

struct GateOptResult {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double cost = 0.0;
  bool converged = true;
  int iterations = 0;
};

/// Deterministic bounded ascent on two_qubit_cost from (0, 0), angles in
/// [-pi, pi], at most 10000 iterations. The returned cost is never below the
/// identity-gate value f(0, 0); non-convergence returns the best iterate
/// with converged = false.
GateOptResult optimize_gate_params(const TwoQubitMoments& m, double tau_eff);

/// All seven edge moments of a state in one pass over the amplitudes.
TwoQubitMoments edge_moments(const StateVector& state, int i, int j);

enum class Mode { measuring_exact, measuring_sampled, approximation };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

struct Circuit {
  struct TwoQubitGate {
    int edge = 0;  // index into the instance edge list
    double theta0 = 0.0;
    double theta1 = 0.0;
  };

  int n = 0;
  std::vector<double> init_angles;    // R_y(phi_i) preparation from |0...0>
  std::vector<double> single_layer;   // theta_i, one per qubit
  std::vector<TwoQubitGate> two_layer;  // in gate-ordering permutation order

  /// Replays the circuit from |0...0>.
  StateVector run(const IsingInstance& inst) const;
};

struct BuildOptions {
  Mode mode = Mode::measuring_exact;
  std::uint64_t shots_pauli = 1000;  // per measurement setting, sampled mode
  bool track_entropy = false;
  std::vector<int> entropy_partition;  // empty = default half cut
};

struct BuildResult {
  Circuit circuit;
  StateVector state;
  std::vector<double> entropy_trace;  // one entry per two-qubit gate
  std::uint64_t pauli_shots = 0;
  bool optimizer_all_converged = true;
};

/// Builds one pass of the ansatz for the given edge ordering and initial
/// product-state angles, returning the parameterized circuit and the evolved
/// state. Moment source per mode: exact expectations of the evolving state
/// (measuring_exact), shot estimates over five commuting settings
/// {ZZ},{YZ},{ZY},{XX,X_i,X_j},{YY} (measuring_sampled), or analytic
/// product-state formulas at the post-single-layer angles (approximation).
BuildResult build_circuit(const IsingInstance& inst, const GateOrdering& ordering,
                          double tau, std::span<const double> init_angles,
                          const BuildOptions& options, Rng& rng);

}  // namespace itemc
