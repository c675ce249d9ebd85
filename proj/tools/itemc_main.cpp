// Command-line front end: instance generation, single solves, classical
// baselines, benchmark grids, and figure-data reports.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "itemc/bench.hpp"
#include "itemc/serialize.hpp"

namespace {

namespace fs = std::filesystem;

fs::path resolve_out(const std::string& out, const std::string& fallback_name) {
  if (!out.empty()) return out;
  const char* dir = std::getenv("ITEMC_OUT_DIR");
  return fs::path(dir ? dir : ".") / fallback_name;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QUBO/Ising optimization via an imaginary-time-mimicking circuit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random Ising instance");
  int gen_n = 10;
  std::string gen_graph = "complete";
  double gen_density = 0.5;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "number of spins")->required();
  gen->add_option("--graph", gen_graph, "complete | three_regular | density");
  gen->add_option("--density", gen_density, "edge density for --graph density");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output instance document");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "run the iterative solver once");
  std::string solve_instance, solve_config, solve_out;
  std::string solve_mode, solve_sorting, solve_fixed_kind;
  itemc::SolverConfig solver_defaults;
  double solve_tau = solver_defaults.tau, solve_alpha = solver_defaults.alpha;
  double solve_conv_tol = solver_defaults.conv_tol;
  std::uint64_t solve_shots = solver_defaults.shots;
  std::uint64_t solve_shots_pauli = solver_defaults.shots_pauli;
  int solve_max_iters = solver_defaults.max_iters;
  std::uint64_t solve_seed = 0;
  bool solve_entropy = false;
  solve_cmd->add_option("--instance", solve_instance, "instance document")->required();
  solve_cmd->add_option("--config", solve_config, "solver config document");
  solve_cmd->add_option("--tau", solve_tau, "imaginary time per iteration");
  solve_cmd->add_option("--alpha", solve_alpha, "CVaR fraction");
  solve_cmd->add_option("--shots", solve_shots, "final-state sampling shots");
  solve_cmd->add_option("--shots-pauli", solve_shots_pauli,
                        "per-setting shots in measuring_sampled mode");
  solve_cmd->add_option("--mode", solve_mode,
                        "measuring_exact | measuring_sampled | approximation");
  solve_cmd->add_option("--sorting", solve_sorting, "adaptive | random | fixed");
  solve_cmd->add_option("--fixed-kind", solve_fixed_kind,
                        "ordering for --sorting fixed (original, ascending_J, ...)");
  solve_cmd->add_option("--max-iters", solve_max_iters, "total iteration budget");
  solve_cmd->add_option("--conv-tol", solve_conv_tol, "relative CVaR change");
  solve_cmd->add_option("--seed", solve_seed, "run seed");
  solve_cmd->add_flag("--track-entropy", solve_entropy, "record entropy traces");
  solve_cmd->add_option("--out", solve_out, "output run record");

  // brute
  auto* brute = app.add_subcommand("brute", "exact optima by enumeration");
  std::string brute_instance, brute_out;
  int brute_k = 3;
  std::uint64_t brute_seed = 0;
  brute->add_option("--instance", brute_instance, "instance document")->required();
  brute->add_option("--k", brute_k, "number of lowest-energy configurations");
  brute->add_option("--seed", brute_seed, "unused; accepted for CLI uniformity");
  brute->add_option("--out", brute_out, "output optima report");

  // anneal
  auto* anneal = app.add_subcommand("anneal", "simulated-annealing sampler");
  std::string anneal_instance, anneal_out;
  itemc::AnnealParams anneal_params;
  anneal->add_option("--instance", anneal_instance, "instance document")->required();
  anneal->add_option("--reads", anneal_params.num_reads, "independent restarts");
  anneal->add_option("--sweeps", anneal_params.sweeps, "sweeps per read");
  anneal->add_option("--seed", anneal_params.seed, "sampler seed");
  anneal->add_option("--out", anneal_out, "output sample set");

  // bench
  auto* bench = app.add_subcommand("bench", "run an experiment grid");
  std::string bench_config, bench_out;
  std::uint64_t bench_seed = 0;
  bool bench_seed_set = false;
  bench->add_option("--config", bench_config, "experiment config document")->required();
  bench->add_option("--seed", bench_seed, "master seed override")
      ->each([&](const std::string&) { bench_seed_set = true; });
  bench->add_option("--out", bench_out, "output directory override");

  // report
  auto* rep = app.add_subcommand("report", "aggregate results into figure data");
  std::string rep_results, rep_figure, rep_out;
  std::uint64_t rep_seed = 0;
  rep->add_option("--results", rep_results, "results.csv from bench")->required();
  rep->add_option("--figure", rep_figure,
                  "ratio_vs_iteration | ratio_vs_n | ratio_vs_density | "
                  "entropy_vs_n | best3_vs_n")
      ->required();
  rep->add_option("--seed", rep_seed, "unused; accepted for CLI uniformity");
  rep->add_option("--out", rep_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      itemc::GraphSpec spec;
      if (gen_graph == "complete")
        spec = itemc::GraphSpec::complete();
      else if (gen_graph == "three_regular")
        spec = itemc::GraphSpec::three_regular();
      else if (gen_graph == "density")
        spec = itemc::GraphSpec::with_density(gen_density);
      else
        throw std::invalid_argument("unknown graph kind: " + gen_graph);
      const auto inst = itemc::sample_random_ising(gen_n, spec, gen_seed);
      const auto out = resolve_out(gen_out, "instance.json");
      itemc::save_json(out, itemc::to_json(inst));
      std::cout << "wrote " << out.string() << " (" << inst.edges.size()
                << " edges)\n";
    } else if (*solve_cmd) {
      const auto inst = itemc::instance_from_json(itemc::load_json(solve_instance));
      itemc::SolverConfig config;
      if (!solve_config.empty())
        config = itemc::solver_config_from_json(itemc::load_json(solve_config));
      if (solve_cmd->count("--tau")) config.tau = solve_tau;
      if (solve_cmd->count("--alpha")) config.alpha = solve_alpha;
      if (solve_cmd->count("--shots")) config.shots = solve_shots;
      if (solve_cmd->count("--shots-pauli")) config.shots_pauli = solve_shots_pauli;
      if (!solve_mode.empty()) config.mode = itemc::mode_from_string(solve_mode);
      if (!solve_sorting.empty())
        config.sorting = itemc::sorting_strategy_from_string(solve_sorting);
      if (!solve_fixed_kind.empty())
        config.fixed_kind = itemc::ordering_kind_from_string(solve_fixed_kind);
      if (solve_cmd->count("--max-iters")) config.max_iters = solve_max_iters;
      if (solve_cmd->count("--conv-tol")) config.conv_tol = solve_conv_tol;
      if (solve_cmd->count("--seed")) config.seed = solve_seed;
      if (solve_entropy) config.track_entropy = true;

      const auto record = itemc::solve(inst, config);
      const auto budget = itemc::shot_budget(inst, config, record);
      const auto out = resolve_out(solve_out, "run.json");
      auto doc = itemc::to_json(record);
      doc["shot_budget"] = {{"m_terms", budget.m_terms},
                            {"circuit_executions", budget.circuit_executions},
                            {"parameter_shots", budget.parameter_shots},
                            {"cvar_shots", budget.cvar_shots},
                            {"sorting_overhead_shots", budget.sorting_overhead_shots},
                            {"total_shots", budget.total_shots}};
      itemc::save_json(out, doc);
      std::cout << "chosen ordering: " << record.chosen_ordering.label
                << "\nfinal CVaR: " << record.final_cvar()
                << "\nbest energy: " << record.best_energy << " ("
                << record.best_bitstring.str() << ")"
                << "\ncircuit executions: " << record.circuit_executions
                << "\nwrote " << out.string() << "\n";
    } else if (*brute) {
      const auto inst = itemc::instance_from_json(itemc::load_json(brute_instance));
      const auto report = itemc::brute_force(inst, brute_k);
      const auto out = resolve_out(brute_out, "optima.json");
      itemc::save_json(out, itemc::to_json(report));
      std::cout << "ground energy: " << report.ground_energy() << " ("
                << report.entries.front().bits.str()
                << "), degeneracy: " << report.ground_degeneracy << "\nwrote "
                << out.string() << "\n";
    } else if (*anneal) {
      const auto inst = itemc::instance_from_json(itemc::load_json(anneal_instance));
      const auto samples = itemc::simulated_annealing(inst, anneal_params);
      const auto out = resolve_out(anneal_out, "anneal.json");
      itemc::save_json(out, itemc::to_json(samples));
      std::cout << "best sampled energy: " << samples.best_energy() << " ("
                << samples.best_bitstring().str() << ")\nwrote " << out.string()
                << "\n";
    } else if (*bench) {
      auto config =
          itemc::experiment_config_from_json(itemc::load_json(bench_config));
      if (bench_seed_set) config.master_seed = bench_seed;
      if (!bench_out.empty()) config.out_dir = bench_out;
      const auto rows = itemc::run_experiment(config);
      std::cout << "wrote " << (config.out_dir / "results.csv").string() << " ("
                << rows.size() << " rows)\n";
    } else if (*rep) {
      const auto rows = itemc::read_results_csv(rep_results);
      const auto kind = itemc::figure_kind_from_string(rep_figure);
      const auto out_dir = resolve_out(rep_out, "figures");
      const auto path = itemc::report(rows, kind, out_dir);
      std::cout << "wrote " << path.string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
