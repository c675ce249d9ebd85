// Exact dense statevector simulator for the gate set the algorithm needs:
// R_y rotations, the commuting YZ+ZY two-qubit unitary, measurement
// sampling, Pauli expectations, bipartite entanglement entropy, and an exact
// (non-unitary) imaginary-time-evolution oracle used for testing.
//
// Basis convention: basis index b has qubit i in state bit_i(b), so qubit 0
// is the least significant bit. Gates are applied by in-place amplitude-pair
// (single-qubit) and 4-amplitude-group (two-qubit) updates; no 2^n x 2^n
// matrices are ever formed. All gates used by the algorithm are real
// orthogonal matrices, so algorithm states keep exactly real amplitudes.

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "itemc/instance.hpp"

namespace itemc {

enum class Pauli { X, Y, Z };

struct PauliTerm {
  int qubit = 0;
  Pauli axis = Pauli::Z;
};

// A word is a product of single-qubit Paulis on distinct qubits (1 or 2 here).
using PauliWord = std::vector<PauliTerm>;

struct SampleRecord {
  Bitstring bits;
  std::uint64_t count = 0;
  double energy = 0.0;  // meaningful only after SampleSet::bind
};

struct SampleSet {
  int n = 0;
  std::uint64_t total_shots = 0;
  std::vector<SampleRecord> records;  // ascending by bitstring index
  bool bound = false;

  /// Fills per-record energies against an instance.
  void bind(const IsingInstance& inst);

  double best_energy() const;         // requires bound
  Bitstring best_bitstring() const;   // lowest energy, ties to lower index
};

class StateVector {
 public:
  static constexpr int kMaxQubits = 26;  // dense memory bound

  /// |0...0> on n qubits.
  explicit StateVector(int n);

  /// Tensor product of cos(phi_i/2)|0> + sin(phi_i/2)|1> per qubit.
  static StateVector product_state(std::span<const double> angles);

  int num_qubits() const { return n_; }
  std::uint64_t dim() const { return std::uint64_t{1} << n_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
  std::complex<double>& amp(std::uint64_t b) { return amps_[b]; }
  const std::complex<double>& amp(std::uint64_t b) const { return amps_[b]; }

  double norm() const;
  double max_imag() const;
  std::vector<double> probabilities() const;

  /// R_y(theta) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]] on one qubit.
  void apply_ry(int qubit, double theta);

  /// exp(-i (theta1 Z_i Y_j + theta0 Y_i Z_j) / 2). The two generators
  /// commute, so this is the product of the two single-generator rotations.
  void apply_yzzy(int i, int j, double theta0, double theta1);

  /// Exact <psi|P|psi> for a word on one or two distinct qubits.
  double pauli_expectation(const PauliWord& word) const;

  /// S independent computational-basis measurements; deterministic per seed.
  SampleSet sample(std::uint64_t shots, std::uint64_t seed) const;

  /// Von Neumann entropy (base-2) of the reduced state on `partition`,
  /// a nonempty proper subset of qubits, from the Schmidt spectrum of the
  /// amplitude matrix reshaped along the bipartition.
  double entanglement_entropy(std::span<const int> partition) const;

  /// Debug dump of amplitudes, one "bitstring re im" line per basis state
  /// (n <= 10 only).
  std::string dump_amplitudes() const;

 private:
  int n_;
  std::vector<std::complex<double>> amps_;
};

/// Multiplies each amplitude by exp(-tau * E(b)) and renormalizes; the exact
/// imaginary-time image of the state under the instance Hamiltonian.
StateVector apply_ite_exact(const StateVector& state, const IsingInstance& inst,
                            double tau);

/// <psi|H|psi> = sum_b |amp_b|^2 E(b) for the diagonal Ising Hamiltonian.
double energy_expectation(const StateVector& state, const IsingInstance& inst);

/// Estimates several simultaneously measurable Pauli words from `shots`
/// simulated measurements in a shared rotated basis (each qubit may appear
/// with one axis only across all words). Returns one estimate per word.
std::vector<double> sample_pauli_words(const StateVector& state,
                                       std::span<const PauliWord> words,
                                       std::uint64_t shots, std::uint64_t seed);

/// Default bipartition for entropy traces: qubits {0 .. ceil(n/2)-1}.
std::vector<int> default_entropy_partition(int n);

}  // namespace itemc
