// Experiment orchestration: instance sweeps over sizes, graph kinds, modes,
// sortings, tau and alpha, with per-row metrics (approximation ratio, best-k
// probability, entropy) written to a canonical CSV. Runs are fully
// reproducible from the master seed and resumable row by row; wall times go
// to a separate timing sidecar so the results table stays byte-identical
// across executions.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "itemc/baselines.hpp"
#include "itemc/instance.hpp"
#include "itemc/solver.hpp"

namespace itemc {

/// cvar_value / e_opt. Requires e_opt < 0 (the metric is meaningful as a
/// ratio-to-optimum only for negative optima); then cvar >= e_opt implies a
/// result <= 1 whenever e_opt is exact.
double approximation_ratio(double cvar_value, double e_opt);

/// Total weight of the optima report's k lowest-energy bitstrings: exact
/// amplitude weight from a state, or empirical frequency from samples.
double best_k_probability(const StateVector& state, const OptimaReport& optima, int k);
double best_k_probability(const SampleSet& samples, const OptimaReport& optima, int k);

struct ExperimentConfig {
  std::vector<int> sizes;
  std::vector<GraphSpec> graphs;
  int instances_per_cell = 30;
  SolverConfig solver;  // template; seed is derived per run
  std::vector<Mode> modes;
  std::vector<std::pair<SortingStrategy, OrderingKind>> sortings;
  std::vector<double> taus;
  std::vector<double> alphas;
  bool metric_best3 = true;    // requires exact optima (n <= 24)
  bool metric_entropy = false;
  AnnealParams anneal;  // reference optimum fallback for n > 24
  std::filesystem::path out_dir;
  std::uint64_t master_seed = 1;

  void validate() const;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& config);

struct ResultRow {
  int n = 0;
  std::string graph;
  double density = 0.0;  // actual |E| / C(n, 2)
  int instance_index = 0;
  std::uint64_t instance_seed = 0;
  Mode mode = Mode::measuring_exact;
  std::string sorting;
  double tau = 0.0;
  double alpha = 0.0;
  bool ok = true;           // false when the cell failed; error holds why
  std::string error;
  double e_opt = 0.0;
  bool e_opt_exact = true;
  double cvar_final = 0.0;
  double ratio = 0.0;
  int iterations = 0;
  bool converged = false;
  double best3_prob = 0.0;  // exact weight in the iteration-0 state
  double max_entropy = 0.0;
  int m_terms = 0;
  std::uint64_t circuit_executions = 0;
  std::uint64_t total_shots = 0;
  double best_energy = 0.0;
  std::vector<double> cvar_by_iter;  // carried forward to max_iters entries
  double wall_seconds = 0.0;         // timing sidecar only

  /// Cell key identifying the row for resume checks.
  std::string key() const;
};

inline constexpr const char* kResultsSchema = "itemc-results v1";

/// Runs the grid; writes <out>/results.csv (canonical order), a timing
/// sidecar <out>/timing.csv, and per-run records under <out>/runs/.
/// Existing rows in results.csv are kept and skipped (resume). A failing
/// cell produces a row with ok=false and the error message; the run
/// continues.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);
void write_results_csv(const std::filesystem::path& path,
                       const std::vector<ResultRow>& rows, int max_iters);

enum class FigureKind {
  ratio_vs_iteration,
  ratio_vs_n,
  ratio_vs_density,
  entropy_vs_n,
  best3_vs_n,
};

FigureKind figure_kind_from_string(const std::string& s);

/// Aggregates rows into plot-ready series (means with normal-approximation
/// 95% confidence intervals per cell) and writes one tidy CSV named after
/// the figure kind. Empty cells emit rows with "nan" markers. Returns the
/// output file path.
std::filesystem::path report(const std::vector<ResultRow>& rows, FigureKind kind,
                             const std::filesystem::path& out_dir);

}  // namespace itemc
