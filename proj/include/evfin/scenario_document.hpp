#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "evfin/scenario.hpp"

namespace evfin {

inline constexpr std::string_view scenario_schema_version = "1";

// A parsed scenario file. `scenario` already has every listed variation applied.
struct ScenarioDocument {
    Scenario scenario;
    std::vector<Variation> variations;
    std::vector<std::string> defaults_applied;  // e.g. "equity: 50/50"
    std::filesystem::path source;
};

// `text` is UTF-8 JSON. Relative ledger paths resolve against `base_dir`.
// Throws ValidationError whose message carries the field path and line.
ScenarioDocument parse_scenario_text(std::string_view text, const std::filesystem::path& base_dir = {},
                                     const std::string& source_name = "<input>");

// Throws IoError when the file cannot be read.
ScenarioDocument parse_scenario(const std::filesystem::path& path);

// Lossless JSON for a scenario without a ledger (variations are already folded in).
std::string serialize_scenario(const Scenario& scenario);

} // namespace evfin
