#include "circmech/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <vector>

namespace circmech {

namespace {

struct ScenarioName {
    const char* name;
    Scenario scenario;
};

constexpr ScenarioName kScenarioNames[] = {
    {"comparative_statics", Scenario::ComparativeStatics},
    {"disclosure_equilibrium", Scenario::DisclosureEquilibrium},
    {"elicitation", Scenario::Elicitation},
    {"correlation_collapse", Scenario::CorrelationCollapse},
    {"saito_epoch", Scenario::SaitoEpoch},
    {"construct_analysis", Scenario::ConstructAnalysis},
};

enum class Kind { Real, Int, Str };

struct KeySpec {
    const char* key;
    Kind kind;
    const char* fallback;  // nullptr marks a required key
};

std::vector<KeySpec> schema_for(Scenario scenario) {
    std::vector<KeySpec> keys;
    const auto enforcement = [&keys] {
        keys.push_back({"cost_coeff", Kind::Real, "1"});
        keys.push_back({"cost_exponent", Kind::Real, "1"});
        keys.push_back({"risk_scale", Kind::Real, "100"});
        keys.push_back({"trust_decay", Kind::Real, "1"});
        keys.push_back({"security_scale", Kind::Real, "1"});
    };
    switch (scenario) {
        case Scenario::ComparativeStatics:
            enforcement();
            keys.push_back({"tau_min", Kind::Real, nullptr});
            keys.push_back({"tau_max", Kind::Real, nullptr});
            keys.push_back({"tau_points", Kind::Int, nullptr});
            break;
        case Scenario::DisclosureEquilibrium:
            enforcement();
            keys.push_back({"s0", Kind::Real, nullptr});
            keys.push_back({"n_agents", Kind::Int, "100"});
            keys.push_back({"tau", Kind::Real, "1"});
            keys.push_back({"honesty", Kind::Real, "0.9"});
            keys.push_back({"max_rounds", Kind::Int, "5000"});
            keys.push_back({"deal_value", Kind::Real, "1"});
            keys.push_back({"betrayal_loss", Kind::Real, "0.5"});
            keys.push_back({"surplus_offer", Kind::Real, "0.235"});
            keys.push_back({"gain", Kind::Real, "0.05"});
            keys.push_back({"target_retreat", Kind::Real, "0.1"});
            keys.push_back({"s_min", Kind::Real, "0"});
            keys.push_back({"s_max", Kind::Real, "6"});
            break;
        case Scenario::Elicitation:
            enforcement();
            keys.push_back({"n_agents", Kind::Int, "100"});
            keys.push_back({"tau_max", Kind::Real, "2"});
            keys.push_back({"grid_points", Kind::Int, "10"});
            keys.push_back({"deal_value", Kind::Real, "1"});
            break;
        case Scenario::CorrelationCollapse:
            keys.push_back({"exploit_fraction", Kind::Real, "0.3"});
            keys.push_back({"signal_noise", Kind::Real, "0.05"});
            keys.push_back({"learning_rate", Kind::Real, "0.3"});
            keys.push_back({"rounds", Kind::Int, "10000"});
            keys.push_back({"n_signalers", Kind::Int, "50"});
            keys.push_back({"window_deals", Kind::Int, "3000"});
            keys.push_back({"deal_gain", Kind::Real, "1"});
            keys.push_back({"betrayal_loss", Kind::Real, "2"});
            keys.push_back({"mimic_signal", Kind::Real, "0.9"});
            keys.push_back({"honesty_min", Kind::Real, "0.5"});
            keys.push_back({"honesty_max", Kind::Real, "0.9"});
            keys.push_back({"signal_ref", Kind::Real, "0.7"});
            keys.push_back({"initial_weight", Kind::Real, "8"});
            keys.push_back({"initial_intercept", Kind::Real, "0"});
            break;
        case Scenario::SaitoEpoch:
            keys.push_back({"n_nodes", Kind::Int, "5"});
            keys.push_back({"txs_per_round", Kind::Int, "8"});
            keys.push_back({"mean_fee", Kind::Real, "1"});
            keys.push_back({"max_path_length", Kind::Int, "3"});
            keys.push_back({"threshold", Kind::Real, "2"});
            keys.push_back({"difficulty", Kind::Real, "0.25"});
            keys.push_back({"rounds", Kind::Int, "100"});
            keys.push_back({"payout_miner_fraction", Kind::Real, "0.5"});
            break;
        case Scenario::ConstructAnalysis:
            keys.push_back({"construct", Kind::Str, nullptr});
            break;
    }
    return keys;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
    throw ConfigError(path + ":" + std::to_string(line) + ": " + msg);
}

struct RawEntry {
    std::string value;
    int line = 0;
};

using RawSection = std::map<std::string, RawEntry>;

// Best near-miss among candidates, or empty when nothing is close.
std::string suggest(const std::string& key, const std::vector<std::string>& candidates) {
    std::string best;
    std::size_t best_dist = 4;  // anything farther is not a plausible typo
    for (const std::string& c : candidates) {
        const std::size_t d = levenshtein(key, c);
        if (d < best_dist) {
            best_dist = d;
            best = c;
        }
    }
    return best;
}

double parse_real(const std::string& path, int line, const std::string& key,
                  const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double out = std::strtod(begin, &end);
    if (end != begin + value.size() || !std::isfinite(out)) {
        fail(path, line, "value for '" + key + "' must be a finite number, got '" + value + "'");
    }
    return out;
}

double parse_int(const std::string& path, int line, const std::string& key,
                 const std::string& value) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        fail(path, line, "value for '" + key + "' must be an integer, got '" + value + "'");
    }
    return static_cast<double>(out);
}

std::uint64_t parse_seed(const std::string& path, int line, const std::string& value) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        fail(path, line, "value for 'seed' must be an unsigned integer, got '" + value + "'");
    }
    return out;
}

}  // namespace

std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

const char* to_string(Scenario scenario) {
    for (const ScenarioName& entry : kScenarioNames) {
        if (entry.scenario == scenario) {
            return entry.name;
        }
    }
    return "unknown";
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path + ": cannot open config file");
    }

    RawSection top;
    RawSection params;
    bool in_params = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                fail(path, line_no, "unterminated section header");
            }
            const std::string name = trim(stripped.substr(1, stripped.size() - 2));
            if (name != "params") {
                fail(path, line_no, "unknown section [" + name + "], expected [params]");
            }
            in_params = true;
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            fail(path, line_no, "expected 'key = value', got '" + stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            fail(path, line_no, "missing key before '='");
        }
        if (value.empty()) {
            fail(path, line_no, "empty value for '" + key + "'");
        }
        RawSection& target = in_params ? params : top;
        if (!target.emplace(key, RawEntry{value, line_no}).second) {
            fail(path, line_no, "duplicate key '" + key + "'");
        }
    }

    ScenarioConfig config;
    config.source_path = path;

    const auto scenario_it = top.find("scenario");
    if (scenario_it == top.end()) {
        throw ConfigError(path + ": missing required key 'scenario'");
    }
    bool matched = false;
    for (const ScenarioName& entry : kScenarioNames) {
        if (scenario_it->second.value == entry.name) {
            config.scenario = entry.scenario;
            matched = true;
            break;
        }
    }
    if (!matched) {
        std::vector<std::string> names;
        for (const ScenarioName& entry : kScenarioNames) {
            names.emplace_back(entry.name);
        }
        std::string msg = "unknown scenario '" + scenario_it->second.value + "'";
        const std::string near = suggest(scenario_it->second.value, names);
        if (!near.empty()) {
            msg += " (did you mean '" + near + "'?)";
        }
        fail(path, scenario_it->second.line, msg);
    }

    const std::vector<KeySpec> schema = schema_for(config.scenario);
    std::vector<std::string> top_keys = {"scenario", "seed", "output", "format"};
    std::vector<std::string> param_keys;
    for (const KeySpec& spec : schema) {
        param_keys.emplace_back(spec.key);
    }

    for (const auto& [key, entry] : top) {
        if (key == "scenario") {
            continue;
        }
        if (key == "seed") {
            config.seed = parse_seed(path, entry.line, entry.value);
        } else if (key == "output") {
            config.output_dir = entry.value;
        } else if (key == "format") {
            if (entry.value == "csv") {
                config.format = OutputFormat::Csv;
            } else if (entry.value == "json") {
                config.format = OutputFormat::Json;
            } else {
                fail(path, entry.line,
                     "value for 'format' must be 'csv' or 'json', got '" + entry.value + "'");
            }
        } else {
            std::string msg = "unknown key '" + key + "'";
            const std::string near_top = suggest(key, top_keys);
            const std::string near_param = suggest(key, param_keys);
            if (!near_param.empty() &&
                (near_top.empty() || levenshtein(key, near_param) < levenshtein(key, near_top))) {
                msg += " (did you mean '" + near_param + "' in [params]?)";
            } else if (!near_top.empty()) {
                msg += " (did you mean '" + near_top + "'?)";
            }
            fail(path, entry.line, msg);
        }
    }

    for (const auto& [key, entry] : params) {
        const auto spec_it =
            std::find_if(schema.begin(), schema.end(),
                         [&key = key](const KeySpec& s) { return key == s.key; });
        if (spec_it == schema.end()) {
            std::string msg = "unknown key '" + key + "' in [params] for scenario '" +
                              std::string(to_string(config.scenario)) + "'";
            const std::string near = suggest(key, param_keys);
            if (!near.empty()) {
                msg += " (did you mean '" + near + "'?)";
            }
            fail(path, entry.line, msg);
        }
        switch (spec_it->kind) {
            case Kind::Real:
                config.numbers[key] = parse_real(path, entry.line, key, entry.value);
                break;
            case Kind::Int:
                config.numbers[key] = parse_int(path, entry.line, key, entry.value);
                break;
            case Kind::Str:
                config.paths[key] = entry.value;
                break;
        }
    }

    for (const KeySpec& spec : schema) {
        const bool present = spec.kind == Kind::Str ? config.paths.count(spec.key) > 0
                                                    : config.numbers.count(spec.key) > 0;
        if (present) {
            continue;
        }
        if (spec.fallback == nullptr) {
            throw ConfigError(path + ": missing required key '" + std::string(spec.key) +
                              "' in [params] for scenario '" + to_string(config.scenario) + "'");
        }
        if (spec.kind == Kind::Str) {
            config.paths[spec.key] = spec.fallback;
        } else if (spec.kind == Kind::Int) {
            config.numbers[spec.key] = parse_int(path, 0, spec.key, spec.fallback);
        } else {
            config.numbers[spec.key] = parse_real(path, 0, spec.key, spec.fallback);
        }
    }

    return config;
}

}  // namespace circmech
