// SPDX-License-Identifier: Apache-2.0
//
// Scenario configs. A scenario is a single JSON document; powers may be
// given in watts or dBm (dB for the path-loss constant) with explicit unit
// suffixes on the key names, converted once here. Scenario references
// resolve in order: literal file path, path + ".json", $WPTSIM_SCENARIO_DIR,
// built-in presets. A summary.json written by the CLI can be passed back as
// a scenario; its embedded resolved config is used.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "wpt/experiments.hpp"

namespace wpt {

/// The reference names no file and no built-in preset. Maps to CLI exit
/// code 2 (usage error).
class UnknownScenarioError : public std::runtime_error {
public:
    explicit UnknownScenarioError(const std::string& msg) : std::runtime_error(msg) {}
};

std::vector<std::string> builtin_scenario_names();

/// JSON text of a built-in preset. Throws UnknownScenarioError.
std::string builtin_scenario_text(const std::string& name);

/// Resolves a scenario reference to its raw JSON document (summary files
/// are unwrapped to their embedded scenario).
nlohmann::json load_scenario_json(const std::string& ref);

/// Strict conversion: unknown keys, missing required keys, or wrong types
/// throw ValidationError naming the offending path. Unit-suffixed keys are
/// converted to linear SI here. A missing sweep grid on a
/// distance-distribution scenario resolves to the default grid.
Scenario scenario_from_json(const nlohmann::json& doc);

/// Fully-resolved document (all linear units); parsing it back yields the
/// same scenario.
nlohmann::json scenario_to_json(const Scenario& sc);

/// Applies one `key.path=value` override onto the raw document. The value
/// is parsed as JSON when possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

}  // namespace wpt
