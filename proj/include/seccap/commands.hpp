#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "seccap/network.hpp"
#include "seccap/sim.hpp"

namespace seccap {

// Exit statuses shared by every subcommand.
enum ExitCode : int {
    exit_ok = 0,
    exit_bad_input = 1,
    exit_lp_failure = 2,
    exit_sim_flag = 3,
    exit_insecure = 4,
};

struct RunConfig {
    NetworkModel net;
    std::size_t angles = 64;
    double w1 = 1.0, w2 = 1.0;
    std::uint64_t n = 100000;
    std::uint64_t seed = 0;
    double margin = 0.95;
    std::optional<SimMode> mode;  // defaults per command
    std::string out;

    // flag-only settings
    std::string svg;
    std::string transcript_out;  // verify: dump the audit transcript here
    std::optional<std::pair<double, double>> point;
    bool unsafe_raw_keys = false;
    std::uint32_t trials = 1;
};

// Parses the JSON document (schema in the README). Unknown keys are rejected;
// errors name the offending key. Throws std::invalid_argument.
RunConfig parse_config(const std::string& json_text);

struct CommandResult {
    int code = exit_ok;
    std::string output;   // primary artifact (CSV or JSON)
    std::string svg;      // optional SVG artifact
    std::string summary;  // human-readable lines for stderr/stdout
};

CommandResult cmd_region(const RunConfig& cfg);
CommandResult cmd_compare(const RunConfig& cfg);
CommandResult cmd_simulate(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);

}  // namespace seccap
