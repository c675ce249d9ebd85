#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "itemc/bench.hpp"
#include "itemc/serialize.hpp"
#include "oracles.hpp"

using namespace itemc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("itemc_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ExperimentConfig tiny_config(const fs::path& out) {
  ExperimentConfig config;
  config.sizes = {6};
  config.graphs = {GraphSpec::three_regular()};
  config.instances_per_cell = 3;
  config.solver.mode = Mode::approximation;
  config.solver.sorting = SortingStrategy::adaptive;
  config.solver.shots = 2000;
  config.solver.alpha = 0.05;
  config.solver.max_iters = 3;
  config.modes = {Mode::approximation};
  config.sortings = {{SortingStrategy::adaptive, OrderingKind::original}};
  config.taus = {0.3};
  config.alphas = {0.05};
  config.metric_best3 = true;
  config.metric_entropy = true;
  config.out_dir = out;
  config.master_seed = 77;
  return config;
}

}  // namespace

TEST_CASE("approximation_ratio") {
  CHECK(approximation_ratio(-2.0, -2.0) == doctest::Approx(1.0));
  CHECK(approximation_ratio(0.0, -2.0) == doctest::Approx(0.0));
  CHECK(approximation_ratio(-1.485, -1.5) == doctest::Approx(0.99));
  CHECK_THROWS_AS(approximation_ratio(-1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(approximation_ratio(-1.0, 2.0), std::invalid_argument);
}

TEST_CASE("best_k_probability") {
  const auto inst = testing::two_spin_instance();
  const auto optima = brute_force(inst, 3);

  SUBCASE("uniform superposition over n = 10 at k = 3") {
    const auto big = sample_random_ising(10, GraphSpec::complete(), 4);
    const auto big_optima = brute_force(big, 3);
    const std::vector<double> phi(10, std::numbers::pi / 2.0);
    const auto uniform = StateVector::product_state(phi);
    CHECK(best_k_probability(uniform, big_optima, 3) ==
          doctest::Approx(3.0 / 1024.0).epsilon(1e-10));
  }
  SUBCASE("basis state equal to the ground bitstring") {
    StateVector state(2);
    state.amp(0) = 0.0;
    state.amp(1) = 1.0;  // "10"
    CHECK(best_k_probability(state, optima, 3) == doctest::Approx(1.0));
  }
  SUBCASE("uniform two-spin state at k = 1") {
    const std::vector<double> phi(2, std::numbers::pi / 2.0);
    const auto uniform = StateVector::product_state(phi);
    CHECK(best_k_probability(uniform, optima, 1) == doctest::Approx(0.25));
  }
  SUBCASE("sampled frequencies") {
    SampleSet set;
    set.n = 2;
    set.records = {{Bitstring::from_string("10"), 30, 0.0},
                   {Bitstring::from_string("00"), 70, 0.0}};
    set.total_shots = 100;
    set.bind(inst);
    CHECK(best_k_probability(set, optima, 1) == doctest::Approx(0.3));
  }
  SUBCASE("fewer than k optima rejected") {
    CHECK_THROWS_AS(best_k_probability(StateVector(2), optima, 5),
                    std::invalid_argument);
  }
}

TEST_CASE("experiment grid: row count, determinism, resume") {
  const auto dir_a = temp_dir("grid_a");
  const auto rows = run_experiment(tiny_config(dir_a));
  CHECK(rows.size() == 3);  // 1 cell x 3 instances
  for (const auto& row : rows) {
    CHECK(row.ok);
    CHECK(row.ratio > 0.0);
    CHECK(row.ratio <= 1.0 + 1e-9);
    CHECK(row.e_opt_exact);
    CHECK(row.cvar_by_iter.size() == 3);
    CHECK(row.m_terms == 6 + 9);
    CHECK(!std::isnan(row.best3_prob));
    CHECK(!std::isnan(row.max_entropy));
  }

  SUBCASE("byte-identical results across executions") {
    const auto dir_b = temp_dir("grid_b");
    run_experiment(tiny_config(dir_b));
    CHECK(slurp(dir_a / "results.csv") == slurp(dir_b / "results.csv"));
  }

  SUBCASE("an interrupted run resumes to the identical table") {
    const auto full = slurp(dir_a / "results.csv");
    // Simulate an interruption by truncating to the first 2 data rows.
    const auto dir_c = temp_dir("grid_c");
    auto lines = full;
    int newlines = 0;
    std::size_t cut = 0;
    for (std::size_t k = 0; k < lines.size(); ++k) {
      if (lines[k] == '\n') ++newlines;
      if (newlines == 4) {  // schema + header + 2 rows
        cut = k + 1;
        break;
      }
    }
    std::ofstream partial(dir_c / "results.csv");
    partial << lines.substr(0, cut);
    partial.close();
    auto config = tiny_config(dir_c);
    fs::create_directories(dir_c);  // keep partial file
    const auto resumed = run_experiment(config);
    CHECK(resumed.size() == 3);
    CHECK(slurp(dir_c / "results.csv") == full);
  }

  SUBCASE("round-trip through the CSV reader") {
    const auto back = read_results_csv(dir_a / "results.csv");
    REQUIRE(back.size() == rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      CHECK(back[k].key() == rows[k].key());
      CHECK(back[k].ratio == doctest::Approx(rows[k].ratio).epsilon(1e-15));
      CHECK(back[k].cvar_by_iter.size() == rows[k].cvar_by_iter.size());
    }
  }

  SUBCASE("report emits figure data for every kind") {
    const auto figures = temp_dir("figs");
    for (const char* kind : {"ratio_vs_iteration", "ratio_vs_n", "ratio_vs_density",
                             "entropy_vs_n", "best3_vs_n"}) {
      const auto path = report(rows, figure_kind_from_string(kind), figures);
      CHECK(fs::exists(path));
      const auto text = slurp(path);
      CHECK(text.find("graph,mode,sorting") != std::string::npos);
    }
    CHECK_THROWS_AS(figure_kind_from_string("unknown"), std::invalid_argument);
  }
}

TEST_CASE("confidence intervals shrink with more instances") {
  // Plain-mean CVaR after a single iteration varies across instances; the
  // saturated alpha = 0.05 setting would collapse every ratio to 1.
  auto noisy = [](const fs::path& dir, int instances) {
    auto config = tiny_config(dir);
    config.instances_per_cell = instances;
    config.metric_entropy = false;
    config.alphas = {1.0};
    config.solver.alpha = 1.0;
    config.solver.max_iters = 1;
    return config;
  };
  const auto rows_small = run_experiment(noisy(temp_dir("ci_small"), 4));
  const auto rows_large = run_experiment(noisy(temp_dir("ci_large"), 16));

  auto ci_width = [](const std::vector<ResultRow>& rows) {
    double mean = 0.0;
    for (const auto& r : rows) mean += r.ratio;
    mean /= static_cast<double>(rows.size());
    double ss = 0.0;
    for (const auto& r : rows) ss += (r.ratio - mean) * (r.ratio - mean);
    const double sd = std::sqrt(ss / static_cast<double>(rows.size() - 1));
    return 2.0 * 1.96 * sd / std::sqrt(static_cast<double>(rows.size()));
  };
  CHECK(ci_width(rows_large) < ci_width(rows_small));
}

TEST_CASE("experiment config document round-trip") {
  const char* text = R"({
    "sizes": [6, 8],
    "graphs": ["complete", "three_regular", 0.5],
    "instances_per_cell": 2,
    "solver": {"mode": "approximation", "shots": 1000, "alpha": 0.05, "max_iters": 2},
    "sortings": ["adaptive", "original"],
    "taus": [0.3, 0.6],
    "alphas": [0.05],
    "metrics": {"best3": true, "entropy": false},
    "out": "somewhere",
    "master_seed": 3
  })";
  const auto config = experiment_config_from_json(parse_json(text, "cfg"));
  CHECK(config.sizes == std::vector<int>{6, 8});
  REQUIRE(config.graphs.size() == 3);
  CHECK(config.graphs[2].kind == GraphKind::density);
  CHECK(config.graphs[2].density == 0.5);
  CHECK(config.sortings.size() == 2);
  CHECK(config.sortings[1].first == SortingStrategy::fixed);
  CHECK(config.taus == std::vector<double>{0.3, 0.6});
  CHECK(config.master_seed == 3);
  const auto doc = to_json(config);
  const auto back = experiment_config_from_json(doc);
  CHECK(back.sizes == config.sizes);
  CHECK(back.taus == config.taus);
}
