#include "itemc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "itemc/rng.hpp"

namespace itemc {

std::string to_string(SortingStrategy s) {
  switch (s) {
    case SortingStrategy::adaptive: return "adaptive";
    case SortingStrategy::fixed: return "fixed";
    case SortingStrategy::random: return "random";
  }
  throw std::logic_error("unknown sorting strategy");
}

SortingStrategy sorting_strategy_from_string(const std::string& s) {
  if (s == "adaptive") return SortingStrategy::adaptive;
  if (s == "fixed") return SortingStrategy::fixed;
  if (s == "random") return SortingStrategy::random;
  throw std::invalid_argument("unknown sorting strategy: " + s);
}

void SolverConfig::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in (0, 1]");
  if (shots < 1) throw std::invalid_argument("shots must be positive");
  if (static_cast<std::uint64_t>(std::ceil(alpha * static_cast<double>(shots))) < 1)
    throw std::invalid_argument("ceil(alpha * shots) must be at least 1");
  if (shots_pauli < 1) throw std::invalid_argument("shots_pauli must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be positive");
  if (!(conv_tol >= 0.0)) throw std::invalid_argument("conv_tol must be nonnegative");
}

namespace {

// Indices into samples.records sorted by (energy, bitstring index), plus the
// number of shots drawn from each until ceil(alpha * S) are selected. Shared
// by cvar and sigma_z_alpha so both use the identical selection.
std::vector<std::pair<std::size_t, std::uint64_t>> select_lowest(
    const SampleSet& samples, double alpha) {
  if (!samples.bound)
    throw std::invalid_argument("sample set must be bound to an instance");
  if (samples.records.empty()) throw std::invalid_argument("empty sample set");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in (0, 1]");

  auto take = static_cast<std::uint64_t>(
      std::ceil(alpha * static_cast<double>(samples.total_shots)));
  take = std::min(take, samples.total_shots);

  std::vector<std::size_t> order(samples.records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = samples.records[a];
    const auto& rb = samples.records[b];
    if (ra.energy != rb.energy) return ra.energy < rb.energy;
    return ra.bits.bits < rb.bits.bits;
  });

  std::vector<std::pair<std::size_t, std::uint64_t>> selected;
  for (std::size_t k : order) {
    if (take == 0) break;
    const std::uint64_t use = std::min(take, samples.records[k].count);
    selected.emplace_back(k, use);
    take -= use;
  }
  return selected;
}

}  // namespace

double cvar(const SampleSet& samples, double alpha) {
  const auto selected = select_lowest(samples, alpha);
  double sum = 0.0;
  std::uint64_t total = 0;
  for (const auto& [k, use] : selected) {
    sum += samples.records[k].energy * static_cast<double>(use);
    total += use;
  }
  return sum / static_cast<double>(total);
}

std::vector<double> sigma_z_alpha(const SampleSet& samples, double alpha) {
  const auto selected = select_lowest(samples, alpha);
  std::vector<double> acc(static_cast<std::size_t>(samples.n), 0.0);
  std::uint64_t total = 0;
  for (const auto& [k, use] : selected) {
    const auto& bits = samples.records[k].bits;
    for (int q = 0; q < samples.n; ++q)
      acc[static_cast<std::size_t>(q)] +=
          static_cast<double>(use) * bits.spin(q);
    total += use;
  }
  for (double& v : acc) v /= static_cast<double>(total);
  return acc;
}

std::vector<double> feedback_angles(std::span<const double> sigma_z) {
  std::vector<double> phi(sigma_z.size());
  for (std::size_t q = 0; q < sigma_z.size(); ++q)
    phi[q] = std::acos(std::clamp(sigma_z[q], -1.0, 1.0));
  return phi;
}

double RunRecord::max_entropy() const {
  double m = 0.0;
  for (const auto& it : iterations)
    for (double v : it.entropy_trace) m = std::max(m, v);
  return m;
}

namespace {

constexpr double kConvDenominatorFloor = 1e-12;

struct IterationOutcome {
  IterationResult result;
  StateVector state;
  std::uint64_t executions;
};

IterationOutcome run_iteration(const IsingInstance& inst, const SolverConfig& config,
                               const std::vector<GateOrdering>& candidates,
                               std::span<const double> phi, int iteration,
                               std::size_t* winner_index) {
  const BuildOptions options{.mode = config.mode,
                             .shots_pauli = config.shots_pauli,
                             .track_entropy = config.track_entropy,
                             .entropy_partition = {}};

  std::optional<IterationOutcome> best;
  ShotCounts spent;
  Bitstring best_bits;
  double best_energy = 0.0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    Rng rng(seed_mix(config.seed, 0x6275696c64ULL,
                     static_cast<std::uint64_t>(iteration), c));
    BuildResult build = build_circuit(inst, candidates[c], config.tau, phi, options, rng);
    SampleSet samples = build.state.sample(
        config.shots,
        seed_mix(config.seed, 0x73616d706cULL, static_cast<std::uint64_t>(iteration), c));
    samples.bind(inst);
    spent.cvar += config.shots;
    spent.pauli += build.pauli_shots;

    IterationResult res;
    res.index = iteration;
    res.cvar = cvar(samples, config.alpha);
    res.sigma_z = sigma_z_alpha(samples, config.alpha);
    res.entropy_trace = std::move(build.entropy_trace);

    // Losing candidates still cost shots and may hold the best sample.
    if (c == 0 || samples.best_energy() < best_energy) {
      best_energy = samples.best_energy();
      best_bits = samples.best_bitstring();
    }
    if (!best || res.cvar < best->result.cvar) {
      best = IterationOutcome{std::move(res), std::move(build.state), 0};
      if (winner_index) *winner_index = c;
    }
  }
  best->executions = candidates.size();
  best->result.shots_used = spent;
  best->result.best_energy = best_energy;
  best->result.best_bitstring = best_bits;
  return std::move(*best);
}

}  // namespace

RunRecord solve(const IsingInstance& inst, const SolverConfig& config,
                const SolveHooks& hooks) {
  config.validate();
  inst.validate();
  if (inst.n > StateVector::kMaxQubits)
    throw std::invalid_argument("instance exceeds the simulator qubit cap");

  // Candidate orderings for iteration 0. With no edges all orderings
  // coincide, so a single candidate suffices (covers n = 1).
  std::vector<GateOrdering> candidates;
  if (inst.edges.empty() || config.sorting == SortingStrategy::fixed) {
    candidates.push_back(make_ordering(
        inst, config.sorting == SortingStrategy::fixed ? config.fixed_kind
                                                       : OrderingKind::original));
  } else if (config.sorting == SortingStrategy::random) {
    candidates.push_back(random_ordering(inst, seed_mix(config.seed, 0x7368756666ULL)));
  } else {
    const auto all = gate_orderings(inst);
    candidates.assign(all.begin(), all.end());
  }

  RunRecord record;
  record.config = config;

  auto marked_probability = [&hooks](const StateVector& state) {
    double p = 0.0;
    for (std::uint64_t b : hooks.marked_bitstrings) p += std::norm(state.amp(b));
    return p;
  };

  // Iteration 0: uniform superposition start, ordering selection.
  std::vector<double> phi(static_cast<std::size_t>(inst.n), std::numbers::pi / 2.0);
  std::size_t winner = 0;
  IterationOutcome outcome = run_iteration(inst, config, candidates, phi, 0, &winner);
  record.chosen_ordering = candidates[winner];
  record.circuit_executions = outcome.executions;
  outcome.result.marked_probability = marked_probability(outcome.state);
  record.best_bitstring = outcome.result.best_bitstring;
  record.best_energy = outcome.result.best_energy;
  if (hooks.on_state) hooks.on_state(0, outcome.state);
  record.iterations.push_back(std::move(outcome.result));

  const std::vector<GateOrdering> chosen = {record.chosen_ordering};
  for (int t = 1; t < config.max_iters; ++t) {
    phi = feedback_angles(record.iterations.back().sigma_z);
    IterationOutcome next = run_iteration(inst, config, chosen, phi, t, nullptr);
    record.circuit_executions += next.executions;
    next.result.marked_probability = marked_probability(next.state);

    // Running best is a minimum over everything sampled so far.
    if (next.result.best_energy < record.best_energy) {
      record.best_energy = next.result.best_energy;
      record.best_bitstring = next.result.best_bitstring;
    } else {
      next.result.best_energy = record.best_energy;
      next.result.best_bitstring = record.best_bitstring;
    }

    const double prev = record.iterations.back().cvar;
    if (hooks.on_state) hooks.on_state(t, next.state);
    record.iterations.push_back(std::move(next.result));

    const double rel = std::abs(record.iterations.back().cvar - prev) /
                       std::max(std::abs(prev), kConvDenominatorFloor);
    if (rel < config.conv_tol) {
      record.converged = true;
      break;
    }
  }

  record.iterations_to_convergence = static_cast<int>(record.iterations.size());
  for (const auto& it : record.iterations) {
    record.total_shots += it.shots_used.cvar + it.shots_used.pauli;
  }
  return record;
}

ShotBudget shot_budget(const IsingInstance& inst, const SolverConfig& config,
                       const RunRecord& record) {
  ShotBudget budget;
  budget.m_terms = inst.n + static_cast<int>(inst.edges.size());
  budget.circuit_executions = record.circuit_executions;
  budget.cvar_shots = config.shots * record.circuit_executions;
  if (config.mode == Mode::measuring_sampled)
    budget.parameter_shots = 5 * config.shots_pauli * inst.edges.size() *
                             record.circuit_executions;
  const std::uint64_t candidates_at_zero =
      record.circuit_executions - static_cast<std::uint64_t>(record.feedback_iterations());
  const std::uint64_t per_execution =
      config.shots + (config.mode == Mode::measuring_sampled
                          ? 5 * config.shots_pauli * inst.edges.size()
                          : 0);
  budget.sorting_overhead_shots = (candidates_at_zero - 1) * per_execution;
  budget.total_shots = budget.cvar_shots + budget.parameter_shots;
  return budget;
}

}  // namespace itemc
