#include "itemc/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "itemc/rng.hpp"
#include "itemc/serialize.hpp"

namespace itemc {

using nlohmann::json;

double approximation_ratio(double cvar_value, double e_opt) {
  if (!(e_opt < 0.0))
    throw std::invalid_argument(
        "approximation ratio requires a negative optimum (CVaR / E_opt is not a "
        "ratio-to-optimum otherwise)");
  return cvar_value / e_opt;
}

namespace {

void check_optima(const OptimaReport& optima, int k) {
  if (!optima.exact) throw std::invalid_argument("best-k probability requires exact optima");
  if (k < 1 || static_cast<std::size_t>(k) > optima.entries.size())
    throw std::invalid_argument("optima report has fewer than k entries");
}

}  // namespace

double best_k_probability(const StateVector& state, const OptimaReport& optima, int k) {
  check_optima(optima, k);
  double p = 0.0;
  for (int e = 0; e < k; ++e)
    p += std::norm(state.amp(optima.entries[static_cast<std::size_t>(e)].bits.bits));
  return p;
}

double best_k_probability(const SampleSet& samples, const OptimaReport& optima, int k) {
  check_optima(optima, k);
  double p = 0.0;
  for (int e = 0; e < k; ++e) {
    const auto target = optima.entries[static_cast<std::size_t>(e)].bits.bits;
    for (const auto& r : samples.records)
      if (r.bits.bits == target)
        p += static_cast<double>(r.count) / static_cast<double>(samples.total_shots);
  }
  return p;
}

void ExperimentConfig::validate() const {
  if (sizes.empty() || graphs.empty() || taus.empty() || alphas.empty() ||
      modes.empty() || sortings.empty())
    throw std::invalid_argument("experiment grid has an empty axis");
  if (instances_per_cell < 1)
    throw std::invalid_argument("instances_per_cell must be positive");
  if (out_dir.empty()) throw std::invalid_argument("experiment requires an output path");
}

namespace {

std::string sorting_label(const std::pair<SortingStrategy, OrderingKind>& s) {
  if (s.first == SortingStrategy::fixed) return to_string(s.second);
  return to_string(s.first);
}

std::pair<SortingStrategy, OrderingKind> sorting_from_label(const std::string& label) {
  if (label == "adaptive") return {SortingStrategy::adaptive, OrderingKind::original};
  if (label == "random") return {SortingStrategy::random, OrderingKind::original};
  return {SortingStrategy::fixed, ordering_kind_from_string(label)};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t graph_tag(const GraphSpec& g) {
  return (static_cast<std::uint64_t>(g.kind) << 56) ^
         std::bit_cast<std::uint64_t>(g.density);
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& doc) {
  ExperimentConfig config;
  try {
    config.sizes = doc.at("sizes").get<std::vector<int>>();
    for (const auto& g : doc.at("graphs")) {
      if (g.is_number())
        config.graphs.push_back(GraphSpec::with_density(g.get<double>()));
      else if (g.get<std::string>() == "complete")
        config.graphs.push_back(GraphSpec::complete());
      else if (g.get<std::string>() == "three_regular")
        config.graphs.push_back(GraphSpec::three_regular());
      else
        throw std::invalid_argument("unknown graph spec: " + g.get<std::string>());
    }
    config.instances_per_cell = doc.value("instances_per_cell", 30);
    if (doc.contains("solver"))
      config.solver = solver_config_from_json(doc.at("solver"));
    if (doc.contains("modes"))
      for (const auto& m : doc.at("modes"))
        config.modes.push_back(mode_from_string(m.get<std::string>()));
    else
      config.modes.push_back(config.solver.mode);
    if (doc.contains("sortings"))
      for (const auto& s : doc.at("sortings"))
        config.sortings.push_back(sorting_from_label(s.get<std::string>()));
    else
      config.sortings.push_back({config.solver.sorting, config.solver.fixed_kind});
    config.taus = doc.contains("taus") ? doc.at("taus").get<std::vector<double>>()
                                       : std::vector<double>{config.solver.tau};
    config.alphas = doc.contains("alphas")
                        ? doc.at("alphas").get<std::vector<double>>()
                        : std::vector<double>{config.solver.alpha};
    if (doc.contains("metrics")) {
      config.metric_best3 = doc.at("metrics").value("best3", true);
      config.metric_entropy = doc.at("metrics").value("entropy", false);
    }
    if (doc.contains("anneal")) {
      config.anneal.num_reads = doc.at("anneal").value("num_reads", 200);
      config.anneal.sweeps = doc.at("anneal").value("sweeps", 1000);
    }
    config.out_dir = doc.at("out").get<std::string>();
    config.master_seed = doc.value("master_seed", std::uint64_t{1});
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string{"malformed experiment config: "} + e.what());
  }
  config.validate();
  return config;
}

json to_json(const ExperimentConfig& config) {
  json graphs = json::array();
  for (const auto& g : config.graphs) {
    if (g.kind == GraphKind::density)
      graphs.push_back(g.density);
    else
      graphs.push_back(to_string(g.kind));
  }
  json sortings = json::array();
  for (const auto& s : config.sortings) sortings.push_back(sorting_label(s));
  return json{{"sizes", config.sizes},
              {"graphs", graphs},
              {"instances_per_cell", config.instances_per_cell},
              {"solver", to_json(config.solver)},
              {"modes", [&] {
                 json modes = json::array();
                 for (Mode m : config.modes) modes.push_back(to_string(m));
                 return modes;
               }()},
              {"sortings", sortings},
              {"taus", config.taus},
              {"alphas", config.alphas},
              {"metrics", {{"best3", config.metric_best3}, {"entropy", config.metric_entropy}}},
              {"anneal", {{"num_reads", config.anneal.num_reads},
                          {"sweeps", config.anneal.sweeps}}},
              {"out", config.out_dir.string()},
              {"master_seed", config.master_seed}};
}

std::string ResultRow::key() const {
  std::ostringstream out;
  out << "n=" << n << "|g=" << graph << "|d=" << format_double(density)
      << "|i=" << instance_index << "|mode=" << to_string(mode)
      << "|sort=" << sorting << "|tau=" << format_double(tau)
      << "|alpha=" << format_double(alpha);
  return out.str();
}

namespace {

bool row_key_less(const ResultRow& a, const ResultRow& b) {
  auto tup = [](const ResultRow& r) {
    return std::tuple(r.n, r.graph, r.density, to_string(r.mode), r.sorting, r.tau,
                      r.alpha, r.instance_index);
  };
  return tup(a) < tup(b);
}

std::string csv_escape(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == ',' || c == '\n') c = ';';
  return out;
}

ResultRow compute_row(const ExperimentConfig& config, int n, const GraphSpec& graph,
                      int instance_index, Mode mode,
                      const std::pair<SortingStrategy, OrderingKind>& sorting,
                      double tau, double alpha) {
  ResultRow row;
  row.n = n;
  row.graph = to_string(graph.kind);
  row.instance_index = instance_index;
  row.mode = mode;
  row.sorting = sorting_label(sorting);
  row.tau = tau;
  row.alpha = alpha;
  row.instance_seed =
      seed_mix(config.master_seed, 0x696e7374ULL,
               (static_cast<std::uint64_t>(n) << 32) ^ graph_tag(graph),
               static_cast<std::uint64_t>(instance_index));

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const IsingInstance inst = sample_random_ising(n, graph, row.instance_seed);
    row.density = inst.edges.empty()
                      ? 0.0
                      : static_cast<double>(inst.edges.size()) /
                            (static_cast<double>(n) * (n - 1) / 2.0);
    row.m_terms = n + static_cast<int>(inst.edges.size());

    SolverConfig solver = config.solver;
    solver.mode = mode;
    solver.sorting = sorting.first;
    solver.fixed_kind = sorting.second;
    solver.tau = tau;
    solver.alpha = alpha;
    solver.track_entropy = config.metric_entropy;
    solver.seed = seed_mix(row.instance_seed, 0x736f6c7665ULL,
                           static_cast<std::uint64_t>(mode) * 16 +
                               static_cast<std::uint64_t>(sorting.first) * 4 +
                               static_cast<std::uint64_t>(sorting.second),
                           std::bit_cast<std::uint64_t>(tau) ^
                               std::bit_cast<std::uint64_t>(alpha));

    std::optional<OptimaReport> optima;
    if (n <= kBruteForceMaxQubits)
      optima = brute_force(inst, std::min(3, 1 << n));

    SolveHooks hooks;
    if (config.metric_best3 && optima && optima->entries.size() >= 3)
      for (int e = 0; e < 3; ++e)
        hooks.marked_bitstrings.push_back(
            optima->entries[static_cast<std::size_t>(e)].bits.bits);

    const RunRecord run = solve(inst, solver, hooks);

    row.cvar_final = run.final_cvar();
    row.iterations = static_cast<int>(run.iterations.size());
    row.converged = run.converged;
    row.circuit_executions = run.circuit_executions;
    row.total_shots = run.total_shots;
    row.best_energy = run.best_energy;
    row.max_entropy = config.metric_entropy
                          ? run.max_entropy()
                          : std::numeric_limits<double>::quiet_NaN();
    row.best3_prob = hooks.marked_bitstrings.empty()
                         ? std::numeric_limits<double>::quiet_NaN()
                         : run.iterations.front().marked_probability;

    if (optima) {
      row.e_opt = optima->ground_energy();
      row.e_opt_exact = true;
    } else {
      AnnealParams anneal = config.anneal;
      anneal.seed = seed_mix(row.instance_seed, 0x616e6e65616cULL);
      row.e_opt = reference_optimum(inst, anneal, run.best_energy);
      row.e_opt_exact = false;
    }
    row.ratio = approximation_ratio(row.cvar_final, row.e_opt);

    row.cvar_by_iter.reserve(static_cast<std::size_t>(solver.max_iters));
    for (const auto& it : run.iterations) row.cvar_by_iter.push_back(it.cvar);
    while (static_cast<int>(row.cvar_by_iter.size()) < solver.max_iters)
      row.cvar_by_iter.push_back(row.cvar_by_iter.back());

    // Per-run record document for offline analysis.
    const auto runs_dir = config.out_dir / "runs";
    std::filesystem::create_directories(runs_dir);
    std::string name = row.key();
    for (char& c : name)
      if (c == '|' || c == '=' || c == '.') c = '_';
    save_json(runs_dir / (name + ".json"), to_json(run));
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
    row.cvar_by_iter.assign(static_cast<std::size_t>(config.solver.max_iters),
                            std::numeric_limits<double>::quiet_NaN());
  }
  row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<ResultRow>& rows, int max_iters) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# " << kResultsSchema << " max_iters=" << max_iters << "\n";
  out << "n,graph,density,instance,seed,mode,sorting,tau,alpha,ok,error,e_opt,"
         "e_opt_exact,cvar,ratio,iterations,converged,best3_prob,max_entropy,"
         "m_terms,circuit_executions,total_shots,best_energy";
  for (int k = 1; k <= max_iters; ++k) out << ",cvar_it" << k;
  out << "\n";

  std::vector<ResultRow> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), row_key_less);
  for (const auto& r : sorted) {
    out << r.n << ',' << r.graph << ',' << format_double(r.density) << ','
        << r.instance_index << ',' << r.instance_seed << ',' << to_string(r.mode)
        << ',' << r.sorting << ',' << format_double(r.tau) << ','
        << format_double(r.alpha) << ',' << (r.ok ? 1 : 0) << ','
        << csv_escape(r.error) << ',' << format_double(r.e_opt) << ','
        << (r.e_opt_exact ? 1 : 0) << ',' << format_double(r.cvar_final) << ','
        << format_double(r.ratio) << ',' << r.iterations << ','
        << (r.converged ? 1 : 0) << ',' << format_double(r.best3_prob) << ','
        << format_double(r.max_entropy) << ',' << r.m_terms << ','
        << r.circuit_executions << ',' << r.total_shots << ','
        << format_double(r.best_energy);
    for (int k = 0; k < max_iters; ++k)
      out << ','
          << format_double(k < static_cast<int>(r.cvar_by_iter.size())
                               ? r.cvar_by_iter[static_cast<std::size_t>(k)]
                               : std::numeric_limits<double>::quiet_NaN());
    out << "\n";
  }
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("# itemc-results v1", 0) != 0)
    throw std::runtime_error(path.string() + ": unrecognized results schema");
  std::getline(in, line);  // column header

  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 23) throw std::runtime_error(path.string() + ": short row");

    ResultRow r;
    std::size_t c = 0;
    r.n = std::stoi(fields[c++]);
    r.graph = fields[c++];
    r.density = std::stod(fields[c++]);
    r.instance_index = std::stoi(fields[c++]);
    r.instance_seed = std::stoull(fields[c++]);
    r.mode = mode_from_string(fields[c++]);
    r.sorting = fields[c++];
    r.tau = std::stod(fields[c++]);
    r.alpha = std::stod(fields[c++]);
    r.ok = fields[c++] == "1";
    r.error = fields[c++];
    r.e_opt = std::stod(fields[c++]);
    r.e_opt_exact = fields[c++] == "1";
    r.cvar_final = std::stod(fields[c++]);
    r.ratio = std::stod(fields[c++]);
    r.iterations = std::stoi(fields[c++]);
    r.converged = fields[c++] == "1";
    r.best3_prob = std::stod(fields[c++]);
    r.max_entropy = std::stod(fields[c++]);
    r.m_terms = std::stoi(fields[c++]);
    r.circuit_executions = std::stoull(fields[c++]);
    r.total_shots = std::stoull(fields[c++]);
    r.best_energy = std::stod(fields[c++]);
    while (c < fields.size()) r.cvar_by_iter.push_back(std::stod(fields[c++]));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.out_dir);
  const auto results_path = config.out_dir / "results.csv";
  const auto timing_path = config.out_dir / "timing.csv";

  std::map<std::string, ResultRow> done;
  if (std::filesystem::exists(results_path))
    for (auto& row : read_results_csv(results_path)) done.emplace(row.key(), std::move(row));

  std::ofstream timing(timing_path, std::ios::app);
  std::vector<ResultRow> rows;
  for (int n : config.sizes) {
    for (const auto& graph : config.graphs) {
      for (Mode mode : config.modes) {
        for (const auto& sorting : config.sortings) {
          for (double tau : config.taus) {
            for (double alpha : config.alphas) {
              for (int idx = 0; idx < config.instances_per_cell; ++idx) {
                ResultRow probe;
                probe.n = n;
                probe.graph = to_string(graph.kind);
                probe.instance_index = idx;
                probe.mode = mode;
                probe.sorting = sorting_label(sorting);
                probe.tau = tau;
                probe.alpha = alpha;
                // density in the key comes from the generated instance; probe
                // with a provisional key on (n, graph, idx, ...) instead.
                auto match = std::find_if(
                    done.begin(), done.end(), [&](const auto& kv) {
                      const ResultRow& r = kv.second;
                      return r.n == n && r.graph == probe.graph &&
                             r.instance_index == idx && r.mode == mode &&
                             r.sorting == probe.sorting && r.tau == tau &&
                             r.alpha == alpha;
                    });
                if (match != done.end()) {
                  rows.push_back(match->second);
                  continue;
                }
                ResultRow row =
                    compute_row(config, n, graph, idx, mode, sorting, tau, alpha);
                timing << row.key() << ',' << format_double(row.wall_seconds) << "\n";
                timing.flush();
                rows.push_back(std::move(row));
                // Flush progress so an interrupted run can resume.
                write_results_csv(results_path, rows, config.solver.max_iters);
              }
            }
          }
        }
      }
    }
  }
  write_results_csv(results_path, rows, config.solver.max_iters);
  return rows;
}

FigureKind figure_kind_from_string(const std::string& s) {
  if (s == "ratio_vs_iteration") return FigureKind::ratio_vs_iteration;
  if (s == "ratio_vs_n") return FigureKind::ratio_vs_n;
  if (s == "ratio_vs_density") return FigureKind::ratio_vs_density;
  if (s == "entropy_vs_n") return FigureKind::entropy_vs_n;
  if (s == "best3_vs_n") return FigureKind::best3_vs_n;
  throw std::invalid_argument("unknown figure kind: " + s);
}

namespace {

struct Aggregate {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double ci95 = std::numeric_limits<double>::quiet_NaN();
  std::size_t count = 0;
};

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate agg;
  agg.count = values.size();
  if (values.empty()) return agg;
  double sum = 0.0;
  for (double v : values) sum += v;
  agg.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    agg.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
  }
  return agg;
}

using SeriesKey = std::tuple<std::string, std::string, std::string, double, double>;

SeriesKey series_key(const ResultRow& r) {
  return {r.graph, to_string(r.mode), r.sorting, r.tau, r.alpha};
}

void write_series_header(std::ofstream& out, const std::string& extra) {
  out << "# " << kResultsSchema << " figure\n";
  out << "graph,mode,sorting,tau,alpha," << extra << "\n";
}

}  // namespace

std::filesystem::path report(const std::vector<ResultRow>& rows, FigureKind kind,
                             const std::filesystem::path& out_dir) {
  if (rows.empty()) throw std::invalid_argument("results table is empty");
  std::filesystem::create_directories(out_dir);

  std::vector<const ResultRow*> ok_rows;
  for (const auto& r : rows)
    if (r.ok) ok_rows.push_back(&r);

  auto path = out_dir;
  std::ofstream out;
  auto open = [&](const char* name, const std::string& extra) {
    path = out_dir / name;
    out.open(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_series_header(out, extra);
  };

  auto emit_key = [&](const SeriesKey& key) {
    out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key)
        << ',' << format_double(std::get<3>(key)) << ','
        << format_double(std::get<4>(key)) << ',';
  };

  switch (kind) {
    case FigureKind::ratio_vs_iteration: {
      open("ratio_vs_iteration.csv", "n,iteration,mean_ratio,ci95,count");
      std::map<std::pair<SeriesKey, int>, std::map<int, std::vector<double>>> buckets;
      for (const auto* r : ok_rows)
        for (std::size_t k = 0; k < r->cvar_by_iter.size(); ++k)
          buckets[{series_key(*r), r->n}][static_cast<int>(k) + 1].push_back(
              r->cvar_by_iter[k] / r->e_opt);
      for (const auto& [bk, iters] : buckets)
        for (const auto& [iteration, values] : iters) {
          const Aggregate agg = aggregate(values);
          emit_key(bk.first);
          out << bk.second << ',' << iteration << ',' << format_double(agg.mean)
              << ',' << format_double(agg.ci95) << ',' << agg.count << "\n";
        }
      break;
    }
    case FigureKind::ratio_vs_n: {
      open("ratio_vs_n.csv", "n,mean_ratio,ci95,count");
      std::map<SeriesKey, std::map<int, std::vector<double>>> buckets;
      for (const auto* r : ok_rows) buckets[series_key(*r)][r->n].push_back(r->ratio);
      for (const auto& [key, sizes] : buckets)
        for (const auto& [n, values] : sizes) {
          const Aggregate agg = aggregate(values);
          emit_key(key);
          out << n << ',' << format_double(agg.mean) << ',' << format_double(agg.ci95)
              << ',' << agg.count << "\n";
        }
      break;
    }
    case FigureKind::ratio_vs_density: {
      open("ratio_vs_density.csv", "n,density,mean_ratio,ci95,count");
      std::map<std::tuple<std::string, std::string, double, double>,
               std::map<std::pair<int, std::string>, std::vector<std::pair<double, double>>>>
          buckets;
      for (const auto* r : ok_rows)
        buckets[{to_string(r->mode), r->sorting, r->tau, r->alpha}]
               [{r->n, r->graph}].emplace_back(r->density, r->ratio);
      for (const auto& [key, cells] : buckets)
        for (const auto& [cell, pairs] : cells) {
          std::vector<double> densities, ratios;
          for (const auto& [d, ratio] : pairs) {
            densities.push_back(d);
            ratios.push_back(ratio);
          }
          const Aggregate agg = aggregate(ratios);
          out << cell.second << ',' << std::get<0>(key) << ',' << std::get<1>(key)
              << ',' << format_double(std::get<2>(key)) << ','
              << format_double(std::get<3>(key)) << ',' << cell.first << ','
              << format_double(aggregate(densities).mean) << ','
              << format_double(agg.mean) << ',' << format_double(agg.ci95) << ','
              << agg.count << "\n";
        }
      break;
    }
    case FigureKind::entropy_vs_n: {
      open("entropy_vs_n.csv", "n,mean_max_entropy,ci95,count,series_slope");
      std::map<SeriesKey, std::map<int, std::vector<double>>> buckets;
      for (const auto* r : ok_rows)
        if (!std::isnan(r->max_entropy))
          buckets[series_key(*r)][r->n].push_back(r->max_entropy);
      for (const auto& [key, sizes] : buckets) {
        // Least-squares slope of mean entropy against n for the series.
        std::vector<std::pair<double, double>> points;
        for (const auto& [n, values] : sizes)
          points.emplace_back(static_cast<double>(n), aggregate(values).mean);
        double slope = std::numeric_limits<double>::quiet_NaN();
        if (points.size() > 1) {
          double sx = 0, sy = 0, sxx = 0, sxy = 0;
          for (const auto& [x, y] : points) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
          }
          const double m = static_cast<double>(points.size());
          slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        }
        for (const auto& [n, values] : sizes) {
          const Aggregate agg = aggregate(values);
          emit_key(key);
          out << n << ',' << format_double(agg.mean) << ',' << format_double(agg.ci95)
              << ',' << agg.count << ',' << format_double(slope) << "\n";
        }
      }
      break;
    }
    case FigureKind::best3_vs_n: {
      open("best3_vs_n.csv", "n,mean_best3,ci95,count,uniform_baseline");
      std::map<SeriesKey, std::map<int, std::vector<double>>> buckets;
      for (const auto* r : ok_rows)
        if (!std::isnan(r->best3_prob))
          buckets[series_key(*r)][r->n].push_back(r->best3_prob);
      for (const auto& [key, sizes] : buckets)
        for (const auto& [n, values] : sizes) {
          const Aggregate agg = aggregate(values);
          emit_key(key);
          out << n << ',' << format_double(agg.mean) << ',' << format_double(agg.ci95)
              << ',' << agg.count << ','
              << format_double(3.0 / std::pow(2.0, n)) << "\n";
        }
      break;
    }
  }
  return path;
}

}  // namespace itemc
