#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "circmech/config.hpp"
#include "circmech/construct.hpp"
#include "circmech/scenario.hpp"
#include "circmech/taxonomy.hpp"
#include "circmech/version.hpp"

namespace {

int cmd_run(const std::string& config_path) {
    const circmech::ScenarioConfig config = circmech::parse_config(config_path);
    const circmech::RunReport report = circmech::run_scenario(config);
    for (const std::string& name : report.artifacts) {
        std::cout << report.output_dir << "/" << name << "\n";
    }
    if (report.exit_code == 2) {
        std::cerr << "note: scenario finished without converging\n";
    }
    return report.exit_code;
}

int cmd_taxonomy(const std::string& path) {
    const auto entries = circmech::load_taxonomy(path);
    for (const circmech::TaxonomyEntry& e : entries) {
        std::cout << e.name << " | " << circmech::to_string(e.mech_type) << " | "
                  << circmech::to_string(e.reducible) << " | "
                  << circmech::to_string(e.unactionability) << "\n";
    }
    std::cout << entries.size() << " entries\n";
    return 0;
}

int cmd_reduce(const std::string& path) {
    const circmech::Construct original = circmech::load_construct(path);
    const circmech::Construct reduced = circmech::collapse_myerson_chains(original);
    const circmech::ClassificationVerdict verdict = circmech::classify(original);

    std::cout << "layers: " << original.layers.size() << " -> " << reduced.layers.size()
              << "\n";
    std::cout << "circular: " << (original.circular ? "yes" : "no") << "\n";
    std::cout << "reducibility: " << circmech::to_string(verdict.reducible) << "\n";
    std::cout << "unactionability: " << circmech::to_string(verdict.unactionability)
              << "\n";
    std::cout << circmech::serialize_construct(reduced);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic simulator of circular mechanisms"};
    app.set_version_flag("--version", std::string("circmech ") + circmech::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "run a scenario from a config file");
    run->add_option("config", config_path, "scenario config file")->required();

    std::string taxonomy_path;
    CLI::App* taxonomy = app.add_subcommand("taxonomy", "validate and print a taxonomy table");
    taxonomy->add_option("file", taxonomy_path, "taxonomy csv file")->required();

    std::string construct_path;
    CLI::App* reduce = app.add_subcommand("reduce", "collapse and classify a construct");
    reduce->add_option("file", construct_path, "construct description file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(config_path);
        }
        if (taxonomy->parsed()) {
            return cmd_taxonomy(taxonomy_path);
        }
        if (reduce->parsed()) {
            return cmd_reduce(construct_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
