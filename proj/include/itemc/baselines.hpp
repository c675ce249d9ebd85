// Classical reference solvers: exhaustive enumeration for exact optima and a
// Metropolis simulated-annealing sampler for sizes past the enumeration cap.

#pragma once

#include <cstdint>
#include <vector>

#include "itemc/instance.hpp"
#include "itemc/statevector.hpp"

namespace itemc {

struct OptimaReport {
  struct Entry {
    Bitstring bits;
    double energy = 0.0;
  };
  std::vector<Entry> entries;  // ascending energy, ties by bitstring index
  bool exact = false;
  // Number of configurations attaining the minimum energy; equals 2^n when
  // the Hamiltonian is fully degenerate.
  std::uint64_t ground_degeneracy = 0;

  double ground_energy() const { return entries.front().energy; }
};

inline constexpr int kBruteForceMaxQubits = 24;

/// Exact k lowest-energy bitstrings over all 2^n configurations (n <= 24).
/// Reported energies are direct ising_energy evaluations.
OptimaReport brute_force(const IsingInstance& inst, int k);

struct AnnealParams {
  int num_reads = 200;
  int sweeps = 1000;
  std::uint64_t seed = 0;
};

/// Single-spin-flip Metropolis dynamics under a geometric inverse-temperature
/// schedule. Endpoints follow a field-magnitude heuristic: beta_hot accepts a
/// worst-case flip with probability ~0.5, beta_cold accepts a smallest
/// nonzero-field flip with probability ~0.01. Returns the num_reads final
/// configurations as a bound SampleSet; deterministic per seed.
SampleSet simulated_annealing(const IsingInstance& inst, const AnnealParams& params);

/// Reference optimum for approximation ratios: brute force when n <= 24,
/// otherwise min(simulated-annealing best, fallback_best).
double reference_optimum(const IsingInstance& inst, const AnnealParams& params,
                         double fallback_best, bool* exact = nullptr);

}  // namespace itemc
