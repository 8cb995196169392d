#pragma once

#include <string>
#include <utility>
#include <vector>

#include "epb/eulerian.hpp"

namespace epb {

/// Ordered key = value pairs from the flat dotted-key config format.
using KeyValueList = std::vector<std::pair<std::string, std::string>>;

/// Parse "key = value" lines; '#' starts a comment, blank lines ignored.
KeyValueList parse_kv_text(const std::string& text, const std::string& origin = "<string>");
KeyValueList parse_kv_file(const std::string& path);

/// Scenario plus output file naming and the optional Lagrangian cross-check.
struct ScenarioConfig {
    Scenario scenario;
    bool lagrangian_crosscheck = false;
    // Isothermal criterion report parameters (used when K > 0).
    double criteria_T0 = 1.0;
    double criteria_eps = 0.1;
    double criteria_delta0 = 0.05;
    std::string diagnostics_filename = "diagnostics.csv";
    std::string snapshot_prefix = "snapshot";
    std::string summary_filename = "summary.txt";
};

/// Apply one dotted key. Unknown keys or malformed values throw ConfigError
/// naming the offending key.
void apply_config_key(ScenarioConfig& config, const std::string& key, const std::string& value);

/// Build a config from parsed pairs (defaults + overrides, in order).
ScenarioConfig scenario_config_from_kv(const KeyValueList& kv);

/// Environment overrides: EPB_MODEL_K=0.5 sets model.K, EPB_TIME_T_END=2
/// sets time.t_end, and so on (prefix EPB_, first underscore splits the
/// section). Returns the dotted key/value pairs found.
KeyValueList environment_overrides();

/// File + environment. The standard entry point for the CLI.
ScenarioConfig load_scenario_config(const std::string& path);

/// Serialize a config back to the flat format (17 significant digits).
std::string to_kv_text(const ScenarioConfig& config);

/// Named built-in scenario presets (table1-case-a, table2-comparison-3-k0.5, ...).
ScenarioConfig builtin_preset(const std::string& name);
std::vector<std::string> builtin_preset_names();

}  // namespace epb
