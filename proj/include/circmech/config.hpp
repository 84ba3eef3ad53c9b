#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace circmech {

// Scenario configs are flat INI-style files:
//
//   # comment
//   scenario = comparative_statics
//   seed = 42
//   output = out/statics     # optional, default "out"
//   format = csv             # csv or json, default csv
//
//   [params]
//   tau_min = 0
//   tau_max = 2
//   tau_points = 50
//
// Parsing is strict: unknown keys, unknown sections, duplicate keys,
// malformed values, and missing required keys all fail with the file, the
// line, and for misspelled keys the nearest valid name. Defaults exist
// only for the keys listed in each scenario's schema.

enum class Scenario {
    ComparativeStatics,
    DisclosureEquilibrium,
    Elicitation,
    CorrelationCollapse,
    SaitoEpoch,
    ConstructAnalysis,
};

enum class OutputFormat { Csv, Json };

struct ScenarioConfig {
    Scenario scenario = Scenario::ComparativeStatics;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    OutputFormat format = OutputFormat::Csv;
    std::map<std::string, double> numbers;  // numeric params, defaults applied
    std::map<std::string, std::string> paths;  // string params, e.g. construct file
    std::string source_path;  // the config file itself, for manifest hashing
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const char* to_string(Scenario scenario);

// Parses and validates a config file against its scenario's schema.
// Throws ConfigError with "path:line:" context on any violation.
ScenarioConfig parse_config(const std::string& path);

// Edit distance used for near-miss suggestions in error messages.
std::size_t levenshtein(const std::string& a, const std::string& b);

}  // namespace circmech
