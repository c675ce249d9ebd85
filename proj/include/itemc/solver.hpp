// Iterative solver loop.
//
// Iteration 0 starts every qubit at phi = pi/2 (uniform superposition) and,
// under adaptive sorting, runs once per candidate edge ordering, keeping the
// ordering with the lowest sampled CVaR. Each later iteration re-initializes
// qubit i at phi_i = arccos <Z_i>_alpha measured over the best alpha-fraction
// of the previous iteration's shots, and runs a single circuit with the
// chosen ordering. The loop stops on relative CVaR stagnation or when the
// iteration budget is exhausted.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "itemc/ansatz.hpp"
#include "itemc/instance.hpp"
#include "itemc/statevector.hpp"

namespace itemc {

enum class SortingStrategy { adaptive, fixed, random };

std::string to_string(SortingStrategy s);
SortingStrategy sorting_strategy_from_string(const std::string& s);

struct SolverConfig {
  double tau = 0.3;
  double alpha = 0.01;               // CVaR fraction, in (0, 1]
  std::uint64_t shots = 10000;       // final-state sampling per circuit
  std::uint64_t shots_pauli = 1000;  // per setting, measuring_sampled only
  Mode mode = Mode::measuring_exact;
  SortingStrategy sorting = SortingStrategy::adaptive;
  OrderingKind fixed_kind = OrderingKind::original;  // for sorting == fixed
  int max_iters = 5;        // total iteration budget, including iteration 0
  double conv_tol = 1e-4;   // relative CVaR change
  std::uint64_t seed = 0;
  bool track_entropy = false;

  void validate() const;
};

/// Mean of the lowest ceil(alpha * S) sampled energies, counting shot
/// multiplicities; cutoff ties are resolved toward lower bitstring indices.
double cvar(const SampleSet& samples, double alpha);

/// Per-qubit mean of z_i over the same lowest-energy shot selection as cvar.
std::vector<double> sigma_z_alpha(const SampleSet& samples, double alpha);

/// phi_i = arccos(clamp(<Z_i>_alpha, -1, 1)), in [0, pi].
std::vector<double> feedback_angles(std::span<const double> sigma_z);

struct ShotCounts {
  std::uint64_t cvar = 0;   // final-state sampling shots
  std::uint64_t pauli = 0;  // parameter-estimation shots (sampled mode only)
};

struct IterationResult {
  int index = 0;
  double cvar = 0.0;
  std::vector<double> sigma_z;
  Bitstring best_bitstring;  // best over all shots of this iteration
  double best_energy = 0.0;
  std::vector<double> entropy_trace;  // present when track_entropy
  ShotCounts shots_used;
  double marked_probability = 0.0;  // exact weight on hook-marked bitstrings
};

struct RunRecord {
  SolverConfig config;
  GateOrdering chosen_ordering;
  std::vector<IterationResult> iterations;
  bool converged = false;
  // Count of iterations until the CVaR stagnation test first fired
  // (== iterations.size() when it never did).
  int iterations_to_convergence = 0;
  std::uint64_t circuit_executions = 0;
  std::uint64_t total_shots = 0;
  Bitstring best_bitstring;  // running best ever sampled
  double best_energy = 0.0;

  double final_cvar() const { return iterations.back().cvar; }
  /// Iterations after the ordering-selection iteration 0.
  int feedback_iterations() const { return static_cast<int>(iterations.size()) - 1; }
  double max_entropy() const;
};

struct SolveHooks {
  /// Called with each recorded iteration's final state (the winning
  /// ordering's state at iteration 0).
  std::function<void(int iteration, const StateVector&)> on_state;
  /// Basis indices whose exact probability is recorded per iteration.
  std::vector<std::uint64_t> marked_bitstrings;
};

RunRecord solve(const IsingInstance& inst, const SolverConfig& config,
                const SolveHooks& hooks = {});

struct ShotBudget {
  int m_terms = 0;  // N + |E|
  std::uint64_t circuit_executions = 0;
  std::uint64_t parameter_shots = 0;  // 5 settings x shots_pauli per gate
  std::uint64_t cvar_shots = 0;
  std::uint64_t sorting_overhead_shots = 0;  // extra candidates at iteration 0
  std::uint64_t total_shots = 0;
};

/// Accounting report for a completed run. Sampled-mode parameter shots are
/// reported as circuit-prefix-equivalent counts (5 settings x shots_pauli per
/// two-qubit gate per executed circuit); exact and approximation modes
/// report zero parameter shots.
ShotBudget shot_budget(const IsingInstance& inst, const SolverConfig& config,
                       const RunRecord& record);

}  // namespace itemc
