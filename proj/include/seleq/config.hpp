#pragma once

#include "seleq/equilibrium.hpp"
#include "seleq/extensions.hpp"
#include "seleq/info_cost.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace seleq {

/// Configuration errors carry a message suitable for direct CLI display;
/// parse errors from the JSON layer keep their byte/line anchors.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One loaded run configuration: the raw document (after overrides), the
/// objects built from it, and a stable hash of the canonical text.
struct RunConfig {
    nlohmann::json doc;
    GridPtr grid;
    TestSet tests;
    MarketMode mode = MarketMode::Baseline;
    SearchParams search;
    std::uint64_t seed = 12345;
    int threads = 1;
    std::string hash_hex;
};

/// Applies one dotted-path override, e.g. "types.mu=0.5". The value is
/// parsed as JSON when possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

RunConfig parse_config(nlohmann::json doc);
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

GridPtr grid_from_config(const nlohmann::json& types);
TestSet test_set_from_config(const nlohmann::json& section, const GridPtr& grid);

/// A single test spec: {"pi": [...]} or {"family": ..., "sigma": ..., "d": ...}.
Test test_from_spec(const nlohmann::json& spec, const GridPtr& grid);

/// Candidate procedure for verify/solve/capacity/wage subcommands: a test
/// index into the set plus either explicit acceptance probabilities or the
/// zero-profit rule, with optional wages.
SelectionProcedure procedure_from_config(const RunConfig& cfg, const nlohmann::json& section);

CostSpec cost_spec_from_config(const nlohmann::json& section);

std::uint64_t fnv1a64(std::string_view text);

} // namespace seleq
