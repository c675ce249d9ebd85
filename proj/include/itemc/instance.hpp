// QUBO / Ising problem instances.
//
// A QUBO minimizes f(x) = x^T Q x over binary vectors x. Substituting
// x_i = (1 - z_i)/2 turns it into a diagonal Ising Hamiltonian
//   E(z) = sum_i h_i z_i + sum_{(i,j)} J_ij z_i z_j,   z_i in {+1, -1},
// with f(x) = E(z) + offset. Bit conventions used project-wide: bit at
// position i belongs to qubit/variable i, and x_i = 0 <-> z_i = +1 <-> |0>.
//
// Instances are immutable after construction and safe to share across
// threads.

#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace itemc {

struct Bitstring {
  int n = 0;
  std::uint64_t bits = 0;  // bit i = variable/qubit i

  int bit(int i) const { return static_cast<int>((bits >> i) & 1u); }
  int spin(int i) const { return 1 - 2 * bit(i); }

  /// Text form "0101..." with position i = qubit i.
  std::string str() const;
  static Bitstring from_string(const std::string& s);
  static Bitstring from_index(int n, std::uint64_t index) { return {n, index}; }

  friend bool operator==(const Bitstring&, const Bitstring&) = default;
};

enum class GraphKind { three_regular, density, complete, custom };

std::string to_string(GraphKind kind);
GraphKind graph_kind_from_string(const std::string& s);

struct GraphSpec {
  GraphKind kind = GraphKind::complete;
  double density = 0.0;  // only meaningful for GraphKind::density

  static GraphSpec three_regular() { return {GraphKind::three_regular, 0.0}; }
  static GraphSpec complete() { return {GraphKind::complete, 0.0}; }
  static GraphSpec with_density(double d) { return {GraphKind::density, d}; }
};

struct InstanceMeta {
  GraphKind graph_kind = GraphKind::custom;
  double density = 0.0;
  std::uint64_t seed = 0;
  bool generated = false;
};

struct IsingEdge {
  int i = 0;
  int j = 0;
  double coupling = 0.0;
};

struct IsingInstance {
  int n = 0;
  std::vector<double> h;
  std::vector<IsingEdge> edges;  // canonical order: ascending lexicographic (i, j)
  InstanceMeta meta;

  /// Throws std::invalid_argument on any structural violation
  /// (h size mismatch, edge out of range, i >= j, duplicate pair).
  void validate() const;

  /// Neighbor lists: adjacency()[i] = {(j, J_ij), ...} for both endpoints.
  std::vector<std::vector<std::pair<int, double>>> adjacency() const;

  /// max_i (|h_i| + sum_j |J_ij|): bound on any single-spin local field.
  double max_local_field() const;
  /// Smallest nonzero coefficient magnitude over h and J (0 if all zero).
  double min_nonzero_coefficient() const;
};

struct QuboMatrix {
  int n = 0;
  std::vector<double> q;  // row-major n*n, symmetric

  double at(int i, int j) const { return q[static_cast<std::size_t>(i) * n + j]; }
  void validate() const;  // symmetry and size

  /// f(x) = x^T Q x.
  double value(const Bitstring& x) const;
};

/// Random instance with coefficients uniform in [-1, 1], quantized to 4
/// decimal digits. Deterministic for fixed (n, spec, seed). Edge counts:
/// 3n/2 for three_regular (n even, n >= 4), round(d*n*(n-1)/2) for
/// density(d) with 0 < d <= 1 (round half away from zero), n(n-1)/2 for
/// complete.
IsingInstance sample_random_ising(int n, const GraphSpec& spec, std::uint64_t seed);

/// Maps a symmetric QUBO to (Ising instance, offset) so that for every
/// bitstring x: qubo.value(x) == ising_energy(inst, x) + offset.
/// Zero off-diagonal entries produce no edge.
std::pair<IsingInstance, double> qubo_to_ising(const QuboMatrix& qubo);

double ising_energy(const IsingInstance& inst, const Bitstring& x);

/// Same as ising_energy but addressed by basis-state index (bit i = qubit i).
double ising_energy_basis(const IsingInstance& inst, std::uint64_t index);

/// Visits all 2^n basis states exactly once in Gray-code order, passing
/// (basis index, energy). Incremental updates make the sweep O(2^n * degree);
/// energies may differ from direct evaluation by accumulated round-off only.
template <typename Fn>
void for_each_energy(const IsingInstance& inst, Fn&& fn) {
  const int n = inst.n;
  const auto adj = inst.adjacency();
  std::vector<int> z(n, 1);
  double energy = 0.0;
  for (int i = 0; i < n; ++i) energy += inst.h[i];
  for (const auto& e : inst.edges) energy += e.coupling;

  fn(std::uint64_t{0}, energy);
  const std::uint64_t total = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t s = 1; s < total; ++s) {
    const int u = std::countr_zero(s);
    double local = inst.h[u];
    for (const auto& [v, w] : adj[u]) local += w * z[v];
    energy -= 2.0 * z[u] * local;
    z[u] = -z[u];
    gray ^= std::uint64_t{1} << u;
    fn(gray, energy);
  }
}

}  // namespace itemc
