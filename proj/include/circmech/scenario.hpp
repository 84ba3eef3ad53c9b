#pragma once

#include <string>
#include <vector>

#include "circmech/config.hpp"

namespace circmech {

struct RunReport {
    int exit_code = 0;                   // 0 done, 2 finished without converging
    std::string output_dir;              // resolved target directory
    std::vector<std::string> artifacts;  // metrics files written, manifest last
};

// Executes the scenario and writes its metrics files plus a manifest.json
// (config hash, seed, artifact checksums, tool version) into the output
// directory. The CIRCMECH_OUT environment variable overrides the config's
// output directory. Reruns with the same config and seed produce
// byte-identical metrics files; only the manifest timestamp differs.
// Failures throw; non-convergence is an exit code, not an exception.
RunReport run_scenario(const ScenarioConfig& config);

// Shared float formatting for CSV cells ("%.12g").
std::string format_double(double value);

}  // namespace circmech
