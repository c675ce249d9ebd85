// JSON document formats.
//
// Instance documents carry top-level keys "n", "h", "edges" (array of
// [i, j, J]) and "meta" {"graph_kind", "seed", "density", "generated"};
// numbers are serialized with full round-trip precision. Solver configs,
// run records, sample sets and optima reports use the same document family.

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "itemc/baselines.hpp"
#include "itemc/instance.hpp"
#include "itemc/solver.hpp"

namespace itemc {

nlohmann::json to_json(const IsingInstance& inst);
IsingInstance instance_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const SolverConfig& config);
SolverConfig solver_config_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const RunRecord& record);
nlohmann::json to_json(const SampleSet& samples);
SampleSet sample_set_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const OptimaReport& report);

/// Parses a document, rethrowing parse failures with the source name and
/// byte location.
nlohmann::json parse_json(const std::string& text, const std::string& source_name);

nlohmann::json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace itemc
