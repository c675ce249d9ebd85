#include "itemc/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace itemc {

using nlohmann::json;

json to_json(const IsingInstance& inst) {
  json edges = json::array();
  for (const auto& e : inst.edges) edges.push_back({e.i, e.j, e.coupling});
  json meta{{"graph_kind", to_string(inst.meta.graph_kind)},
            {"seed", inst.meta.seed},
            {"generated", inst.meta.generated}};
  if (inst.meta.graph_kind == GraphKind::density) meta["density"] = inst.meta.density;
  return json{{"n", inst.n}, {"h", inst.h}, {"edges", edges}, {"meta", meta}};
}

IsingInstance instance_from_json(const json& doc) {
  IsingInstance inst;
  try {
    inst.n = doc.at("n").get<int>();
    inst.h = doc.at("h").get<std::vector<double>>();
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 3)
        throw std::invalid_argument("edge entries must be [i, j, J] triples");
      inst.edges.push_back(
          {e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
    }
    if (doc.contains("meta")) {
      const auto& meta = doc.at("meta");
      inst.meta.graph_kind =
          graph_kind_from_string(meta.value("graph_kind", std::string{"custom"}));
      inst.meta.seed = meta.value("seed", std::uint64_t{0});
      inst.meta.density = meta.value("density", 0.0);
      inst.meta.generated = meta.value("generated", false);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string{"malformed instance document: "} + e.what());
  }
  inst.validate();
  return inst;
}

json to_json(const SolverConfig& config) {
  return json{{"tau", config.tau},
              {"alpha", config.alpha},
              {"shots", config.shots},
              {"shots_pauli", config.shots_pauli},
              {"mode", to_string(config.mode)},
              {"sorting", to_string(config.sorting)},
              {"fixed_kind", to_string(config.fixed_kind)},
              {"max_iters", config.max_iters},
              {"conv_tol", config.conv_tol},
              {"seed", config.seed},
              {"track_entropy", config.track_entropy}};
}

SolverConfig solver_config_from_json(const json& doc) {
  SolverConfig config;
  try {
    config.tau = doc.value("tau", config.tau);
    config.alpha = doc.value("alpha", config.alpha);
    config.shots = doc.value("shots", config.shots);
    config.shots_pauli = doc.value("shots_pauli", config.shots_pauli);
    if (doc.contains("mode")) config.mode = mode_from_string(doc.at("mode"));
    if (doc.contains("sorting"))
      config.sorting = sorting_strategy_from_string(doc.at("sorting"));
    if (doc.contains("fixed_kind"))
      config.fixed_kind = ordering_kind_from_string(doc.at("fixed_kind"));
    config.max_iters = doc.value("max_iters", config.max_iters);
    config.conv_tol = doc.value("conv_tol", config.conv_tol);
    config.seed = doc.value("seed", config.seed);
    config.track_entropy = doc.value("track_entropy", config.track_entropy);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string{"malformed solver config: "} + e.what());
  }
  config.validate();
  return config;
}

json to_json(const RunRecord& record) {
  json iterations = json::array();
  for (const auto& it : record.iterations) {
    json entry{{"t", it.index},
               {"cvar", it.cvar},
               {"sigma_z_alpha", it.sigma_z},
               {"best_bitstring", it.best_bitstring.str()},
               {"best_energy", it.best_energy},
               {"shots", {{"cvar", it.shots_used.cvar}, {"pauli", it.shots_used.pauli}}},
               {"marked_probability", it.marked_probability}};
    if (!it.entropy_trace.empty()) entry["entropy_trace"] = it.entropy_trace;
    iterations.push_back(std::move(entry));
  }
  return json{{"config", to_json(record.config)},
              {"chosen_ordering",
               {{"label", record.chosen_ordering.label},
                {"permutation", record.chosen_ordering.permutation}}},
              {"iterations", iterations},
              {"converged", record.converged},
              {"iterations_to_convergence", record.iterations_to_convergence},
              {"feedback_iterations", record.feedback_iterations()},
              {"circuit_executions", record.circuit_executions},
              {"total_shots", record.total_shots},
              {"best_bitstring", record.best_bitstring.str()},
              {"best_energy", record.best_energy}};
}

json to_json(const SampleSet& samples) {
  json records = json::array();
  for (const auto& r : samples.records) {
    json entry{{"bitstring", r.bits.str()}, {"count", r.count}};
    if (samples.bound) entry["energy"] = r.energy;
    records.push_back(std::move(entry));
  }
  return json{{"n", samples.n},
              {"total_shots", samples.total_shots},
              {"records", records}};
}

SampleSet sample_set_from_json(const json& doc) {
  SampleSet set;
  try {
    set.n = doc.at("n").get<int>();
    set.total_shots = doc.at("total_shots").get<std::uint64_t>();
    bool any_energy = false;
    for (const auto& r : doc.at("records")) {
      SampleRecord rec;
      rec.bits = Bitstring::from_string(r.at("bitstring").get<std::string>());
      rec.count = r.at("count").get<std::uint64_t>();
      if (r.contains("energy")) {
        rec.energy = r.at("energy").get<double>();
        any_energy = true;
      }
      set.records.push_back(rec);
    }
    set.bound = any_energy;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string{"malformed sample set: "} + e.what());
  }
  std::uint64_t total = 0;
  for (const auto& r : set.records) total += r.count;
  if (total != set.total_shots)
    throw std::invalid_argument("sample set counts do not sum to total_shots");
  return set;
}

json to_json(const OptimaReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries)
    entries.push_back({{"bitstring", e.bits.str()}, {"energy", e.energy}});
  return json{{"entries", entries},
              {"exact", report.exact},
              {"ground_degeneracy", report.ground_degeneracy}};
}

json parse_json(const std::string& text, const std::string& source_name) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(source_name + ": " + e.what());
  }
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_json(text, path.string());
}

void save_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace itemc
