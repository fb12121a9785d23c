#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gsparse/cli/experiment.hpp"

namespace gsparse::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;  // ran fine, verdict is negative

// GSPARSE_MAX_ENUM, when set, replaces EnumerationLimits::max_supports.
EnumerationLimits limits_from_env();

// Writes matrix.json, groups.json, truth.json and measurements.json for one
// trial of `config` into `dir`. Returns the paths written.
std::vector<std::string> cmd_gen(const ExperimentConfig& config, const std::string& dir, int trial = 0,
                                 const EnumerationLimits& limits = {});

// Flattens a JSON object into a header line and one value line. Nested
// values are written as quoted JSON.
std::string object_csv(const Json& j);

// Entry point behind the gsparse executable. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gsparse::cli
