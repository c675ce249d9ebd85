#include "itemc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>

#include "itemc/rng.hpp"

namespace itemc {

OptimaReport brute_force(const IsingInstance& inst, int k) {
  inst.validate();
  if (inst.n > kBruteForceMaxQubits)
    throw std::invalid_argument(
        "brute force is capped at 24 qubits; use simulated_annealing for larger "
        "instances");
  if (k < 1) throw std::invalid_argument("k must be positive");

  // Max-heap of the k best (energy, index) seen so far. The Gray-code sweep
  // accumulates round-off, so candidates near the cutoff are re-evaluated
  // directly and the heap stores exact energies only.
  using HeapEntry = std::pair<double, std::uint64_t>;
  auto worse = [](const HeapEntry& a, const HeapEntry& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  };
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, decltype(worse)> heap(worse);
  constexpr double kDriftMargin = 1e-9;

  for_each_energy(inst, [&](std::uint64_t b, double approx_energy) {
    if (static_cast<int>(heap.size()) == k &&
        approx_energy > heap.top().first + kDriftMargin)
      return;
    const double energy = ising_energy_basis(inst, b);
    if (static_cast<int>(heap.size()) < k) {
      heap.emplace(energy, b);
    } else if (worse(HeapEntry{energy, b}, heap.top())) {
      heap.pop();
      heap.emplace(energy, b);
    }
  });

  OptimaReport report;
  report.exact = true;
  report.entries.resize(heap.size());
  for (auto it = report.entries.rbegin(); it != report.entries.rend(); ++it) {
    it->bits = Bitstring::from_index(inst.n, heap.top().second);
    it->energy = heap.top().first;
    heap.pop();
  }

  const double ground = report.entries.front().energy;
  std::uint64_t degeneracy = 0;
  for_each_energy(inst, [&](std::uint64_t b, double approx_energy) {
    if (approx_energy <= ground + kDriftMargin &&
        ising_energy_basis(inst, b) == ground)
      ++degeneracy;
  });
  report.ground_degeneracy = degeneracy;
  return report;
}

SampleSet simulated_annealing(const IsingInstance& inst, const AnnealParams& params) {
  inst.validate();
  if (params.num_reads < 1 || params.sweeps < 1)
    throw std::invalid_argument("num_reads and sweeps must be positive");

  // Schedule endpoints from coefficient magnitudes. A single flip changes the
  // energy by at most 2 * max_local_field and, when it costs anything at all,
  // by at least 2 * min_nonzero_coefficient.
  const double hot_scale = std::max(2.0 * inst.max_local_field(), 1e-12);
  const double cold_scale = std::max(2.0 * inst.min_nonzero_coefficient(), 1e-12);
  const double beta_hot = std::log(2.0) / hot_scale;
  const double beta_cold = std::log(100.0) / cold_scale;

  const auto adj = inst.adjacency();
  const int n = inst.n;
  std::map<std::uint64_t, std::uint64_t> counts;

  for (int read = 0; read < params.num_reads; ++read) {
    Rng rng(seed_mix(params.seed, 0x616e6e65616cULL, static_cast<std::uint64_t>(read)));
    std::vector<int> z(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      z[static_cast<std::size_t>(i)] = (rng.next() & 1u) ? -1 : 1;

    for (int sweep = 0; sweep < params.sweeps; ++sweep) {
      const double frac = params.sweeps == 1
                              ? 1.0
                              : static_cast<double>(sweep) /
                                    static_cast<double>(params.sweeps - 1);
      const double beta = beta_hot * std::pow(beta_cold / beta_hot, frac);
      for (int i = 0; i < n; ++i) {
        double local = inst.h[static_cast<std::size_t>(i)];
        for (const auto& [v, w] : adj[static_cast<std::size_t>(i)])
          local += w * z[static_cast<std::size_t>(v)];
        const double delta = -2.0 * z[static_cast<std::size_t>(i)] * local;
        if (delta <= 0.0 || rng.uniform01() < std::exp(-beta * delta))
          z[static_cast<std::size_t>(i)] = -z[static_cast<std::size_t>(i)];
      }
    }

    std::uint64_t bits = 0;
    for (int i = 0; i < n; ++i)
      if (z[static_cast<std::size_t>(i)] < 0) bits |= std::uint64_t{1} << i;
    ++counts[bits];
  }

  SampleSet set;
  set.n = n;
  set.total_shots = static_cast<std::uint64_t>(params.num_reads);
  set.records.reserve(counts.size());
  for (const auto& [index, count] : counts)
    set.records.push_back({Bitstring::from_index(n, index), count, 0.0});
  set.bind(inst);
  return set;
}

double reference_optimum(const IsingInstance& inst, const AnnealParams& params,
                         double fallback_best, bool* exact) {
  if (inst.n <= kBruteForceMaxQubits) {
    if (exact) *exact = true;
    return brute_force(inst, 1).ground_energy();
  }
  if (exact) *exact = false;
  const SampleSet samples = simulated_annealing(inst, params);
  return std::min(samples.best_energy(), fallback_best);
}

}  // namespace itemc
