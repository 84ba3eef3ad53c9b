#include "circmech/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "circmech/construct.hpp"
#include "circmech/disclosure.hpp"
#include "circmech/elicitation.hpp"
#include "circmech/enforcement.hpp"
#include "circmech/hash.hpp"
#include "circmech/saito.hpp"
#include "circmech/version.hpp"

namespace circmech {

namespace {

using ordered_json = nlohmann::ordered_json;

EnforcementParams enforcement_from(const ScenarioConfig& config) {
    EnforcementParams p;
    p.cost_coeff = config.numbers.at("cost_coeff");
    p.cost_exponent = config.numbers.at("cost_exponent");
    p.risk_scale = config.numbers.at("risk_scale");
    p.trust_decay = config.numbers.at("trust_decay");
    p.security_scale = config.numbers.at("security_scale");
    return p;
}

int positive_int(const ScenarioConfig& config, const char* key) {
    const double v = config.numbers.at(key);
    if (!(v >= 1.0)) {
        throw std::invalid_argument(std::string("config: '") + key +
                                    "' must be a positive integer");
    }
    return static_cast<int>(v);
}

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 2 || !(hi > lo)) {
        throw std::invalid_argument("config: grid needs at least 2 points and max > min");
    }
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return grid;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::string csv_cell(const ordered_json& v) {
    if (v.is_number_float()) {
        return format_double(v.get<double>());
    }
    if (v.is_number_unsigned()) {
        return std::to_string(v.get<std::uint64_t>());
    }
    if (v.is_number_integer()) {
        return std::to_string(v.get<std::int64_t>());
    }
    if (v.is_boolean()) {
        return v.get<bool>() ? "1" : "0";
    }
    return v.get<std::string>();
}

// Rows are emitted in the requested format under <stem>.csv or <stem>.json.
std::string write_rows(const std::filesystem::path& dir, const std::string& stem,
                       const std::vector<std::string>& columns, const ordered_json& rows,
                       OutputFormat format) {
    if (format == OutputFormat::Json) {
        const std::string name = stem + ".json";
        write_text(dir / name, rows.dump(2) + "\n");
        return name;
    }
    std::string text;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        text += columns[i];
        text += (i + 1 == columns.size()) ? '\n' : ',';
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            text += csv_cell(row.at(columns[i]));
            text += (i + 1 == columns.size()) ? '\n' : ',';
        }
    }
    const std::string name = stem + ".csv";
    write_text(dir / name, text);
    return name;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct ScenarioOutput {
    int exit_code = 0;
    std::vector<std::string> artifacts;
};

ScenarioOutput run_comparative_statics(const ScenarioConfig& config,
                                       const std::filesystem::path& dir) {
    const EnforcementParams params = enforcement_from(config);
    const std::vector<double> grid =
        linspace(config.numbers.at("tau_min"), config.numbers.at("tau_max"),
                 positive_int(config, "tau_points"));
    const auto curve = comparative_statics(params, grid);

    ordered_json rows = ordered_json::array();
    for (const auto& [tau, s_star] : curve) {
        const EnforcementPoint pt = evaluate(params, s_star, tau);
        rows.push_back({{"tau", tau},
                        {"s_star", s_star},
                        {"cost", pt.cost},
                        {"residual_risk", pt.residual_risk},
                        {"total", pt.total}});
    }
    ScenarioOutput out;
    out.artifacts.push_back(write_rows(dir, "comparative_statics",
                                       {"tau", "s_star", "cost", "residual_risk", "total"},
                                       rows, config.format));
    return out;
}

ScenarioOutput run_disclosure(const ScenarioConfig& config,
                              const std::filesystem::path& dir) {
    EquilibriumConfig eq;
    eq.params = enforcement_from(config);
    eq.agents = make_population(static_cast<std::size_t>(positive_int(config, "n_agents")),
                                config.numbers.at("tau"), config.numbers.at("honesty"));
    eq.controller.security = config.numbers.at("s0");
    eq.controller.target_retreat = config.numbers.at("target_retreat");
    eq.controller.gain = config.numbers.at("gain");
    eq.controller.s_min = config.numbers.at("s_min");
    eq.controller.s_max = config.numbers.at("s_max");
    eq.game.deal_value = config.numbers.at("deal_value");
    eq.game.betrayal_loss = config.numbers.at("betrayal_loss");
    eq.game.surplus_offer = config.numbers.at("surplus_offer");
    eq.max_rounds = positive_int(config, "max_rounds");
    eq.seed = config.seed;

    const SimTrace trace = run_to_equilibrium(eq);
    ordered_json rows = ordered_json::array();
    for (const RoundMetrics& m : trace.rounds) {
        rows.push_back({{"round", m.round},
                        {"security", m.security},
                        {"retreat_rate", m.retreat_rate},
                        {"betrayals", m.betrayals},
                        {"mean_payoff", m.mean_payoff},
                        {"converged", trace.converged}});
    }
    ScenarioOutput out;
    out.exit_code = trace.converged ? 0 : 2;
    out.artifacts.push_back(write_rows(
        dir, "disclosure_equilibrium",
        {"round", "security", "retreat_rate", "betrayals", "mean_payoff", "converged"},
        rows, config.format));
    return out;
}

ScenarioOutput run_elicitation(const ScenarioConfig& config,
                               const std::filesystem::path& dir) {
    const EnforcementParams params = enforcement_from(config);
    const std::vector<double> grid =
        linspace(0.0, config.numbers.at("tau_max"), positive_int(config, "grid_points"));
    const DominanceResult result =
        misreport_dominance(params, static_cast<std::size_t>(positive_int(config, "n_agents")),
                            grid, config.numbers.at("deal_value"));

    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double best_payoff = result.payoffs[i][0];
        for (double p : result.payoffs[i]) {
            best_payoff = std::max(best_payoff, p);
        }
        rows.push_back({{"true_tau", grid[i]},
                        {"best_report", result.best_report[i]},
                        {"truthful_payoff", result.payoffs[i][i]},
                        {"best_payoff", best_payoff},
                        {"truthful", result.truthful}});
    }
    ScenarioOutput out;
    out.artifacts.push_back(write_rows(
        dir, "elicitation",
        {"true_tau", "best_report", "truthful_payoff", "best_payoff", "truthful"}, rows,
        config.format));
    return out;
}

ScenarioOutput run_collapse(const ScenarioConfig& config, const std::filesystem::path& dir) {
    CollapseConfig cc;
    cc.exploit_fraction = config.numbers.at("exploit_fraction");
    cc.signal_noise = config.numbers.at("signal_noise");
    cc.learning_rate = config.numbers.at("learning_rate");
    cc.rounds = positive_int(config, "rounds");
    cc.seed = config.seed;
    cc.n_signalers = positive_int(config, "n_signalers");
    cc.window_deals = positive_int(config, "window_deals");
    cc.deal_gain = config.numbers.at("deal_gain");
    cc.betrayal_loss = config.numbers.at("betrayal_loss");
    cc.mimic_signal = config.numbers.at("mimic_signal");
    cc.honesty_min = config.numbers.at("honesty_min");
    cc.honesty_max = config.numbers.at("honesty_max");
    cc.signal_ref = config.numbers.at("signal_ref");
    cc.initial_weight = config.numbers.at("initial_weight");
    cc.initial_intercept = config.numbers.at("initial_intercept");

    const std::vector<CollapseRound> trace = correlation_collapse(cc);
    ordered_json rows = ordered_json::array();
    for (const CollapseRound& r : trace) {
        rows.push_back({{"round", r.round},
                        {"marginal_correlation", r.marginal_correlation},
                        {"exploiter_profit", r.exploiter_profit},
                        {"mean_signal_weight", r.mean_signal_weight}});
    }
    ScenarioOutput out;
    // The run counts as converged once the signal carries no exploitable
    // correlation at the end.
    out.exit_code = std::abs(trace.back().marginal_correlation) < 0.05 ? 0 : 2;
    out.artifacts.push_back(write_rows(
        dir, "correlation_collapse",
        {"round", "marginal_correlation", "exploiter_profit", "mean_signal_weight"}, rows,
        config.format));
    return out;
}

ScenarioOutput run_saito(const ScenarioConfig& config, const std::filesystem::path& dir) {
    EpochConfig ec;
    ec.n_nodes = positive_int(config, "n_nodes");
    ec.txs_per_round = positive_int(config, "txs_per_round");
    ec.mean_fee = config.numbers.at("mean_fee");
    ec.max_path_length = positive_int(config, "max_path_length");
    ec.threshold = config.numbers.at("threshold");
    ec.difficulty = config.numbers.at("difficulty");
    ec.rounds = positive_int(config, "rounds");
    ec.payout_miner_fraction = config.numbers.at("payout_miner_fraction");
    ec.seed = config.seed;

    const EpochResult result = simulate_epoch(ec);
    ordered_json rows = ordered_json::array();
    for (const BlockMetrics& m : result.blocks) {
        rows.push_back({{"block", m.block},
                        {"producer", m.producer},
                        {"fees", m.fees},
                        {"burn", m.burn},
                        {"attempts", m.attempts},
                        {"winning_router", m.winning_router},
                        {"miner_payout", m.miner_payout},
                        {"router_payout", m.router_payout},
                        {"cum_revision_cost", m.cum_revision_cost}});
    }
    ScenarioOutput out;
    out.artifacts.push_back(
        write_rows(dir, "saito_epoch",
                   {"block", "producer", "fees", "burn", "attempts", "winning_router",
                    "miner_payout", "router_payout", "cum_revision_cost"},
                   rows, config.format));

    ordered_json report;
    report["fees_injected"] = result.conservation.fees_injected;
    report["fees_in_blocks"] = result.conservation.fees_in_blocks;
    report["payouts"] = result.conservation.payouts;
    report["burned"] = result.conservation.burned;
    report["wealth_delta"] = result.conservation.wealth_delta;
    write_text(dir / "saito_conservation.json", report.dump(2) + "\n");
    out.artifacts.push_back("saito_conservation.json");
    return out;
}

ScenarioOutput run_construct_analysis(const ScenarioConfig& config,
                                      const std::filesystem::path& dir) {
    const std::string& source = config.paths.at("construct");
    const Construct original = load_construct(source);
    const Construct reduced = collapse_myerson_chains(original);
    const ClassificationVerdict verdict = classify(original);

    ordered_json walls = ordered_json::array();
    for (const Edge& e : privacy_walls(original)) {
        walls.push_back({{"from", e.from}, {"to", e.to}});
    }
    ordered_json report;
    report["source"] = source;
    report["layers"] = original.layers.size();
    report["reduced_layers"] = reduced.layers.size();
    report["circular"] = original.circular;
    report["reducibility"] = to_string(verdict.reducible);
    report["unactionability"] = to_string(verdict.unactionability);
    report["privacy_walls"] = walls;
    report["reduced_construct"] = serialize_construct(reduced);
    write_text(dir / "construct_analysis.json", report.dump(2) + "\n");

    ScenarioOutput out;
    out.artifacts.push_back("construct_analysis.json");
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

RunReport run_scenario(const ScenarioConfig& config) {
    std::filesystem::path dir = config.output_dir;
    if (const char* env = std::getenv("CIRCMECH_OUT"); env != nullptr && *env != '\0') {
        dir = env;
    }
    std::filesystem::create_directories(dir);

    ScenarioOutput out;
    switch (config.scenario) {
        case Scenario::ComparativeStatics:
            out = run_comparative_statics(config, dir);
            break;
        case Scenario::DisclosureEquilibrium:
            out = run_disclosure(config, dir);
            break;
        case Scenario::Elicitation:
            out = run_elicitation(config, dir);
            break;
        case Scenario::CorrelationCollapse:
            out = run_collapse(config, dir);
            break;
        case Scenario::SaitoEpoch:
            out = run_saito(config, dir);
            break;
        case Scenario::ConstructAnalysis:
            out = run_construct_analysis(config, dir);
            break;
    }

    ordered_json manifest;
    manifest["config_sha256"] = sha256_file_hex(config.source_path);
    manifest["seed"] = config.seed;
    manifest["scenario"] = to_string(config.scenario);
    ordered_json artifacts = ordered_json::array();
    for (const std::string& name : out.artifacts) {
        artifacts.push_back(
            {{"path", name}, {"sha256", sha256_file_hex((dir / name).string())}});
    }
    manifest["artifacts"] = artifacts;
    manifest["tool_version"] = kVersion;
    manifest["generated_at"] = utc_timestamp();
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");

    RunReport report;
    report.exit_code = out.exit_code;
    report.output_dir = dir.string();
    report.artifacts = out.artifacts;
    report.artifacts.push_back("manifest.json");
    return report;
}

}  // namespace circmech
