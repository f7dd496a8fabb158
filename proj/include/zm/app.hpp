#pragma once

// Subcommands of the zmcheck driver. Each returns the exit status
// (0 pass, 1 configuration error, 2 assertion failure), the JSON report and
// a short human-readable summary; write_outputs puts the files on disk.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "zm/config.hpp"

namespace zm {

inline constexpr int kExitPass = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitAssertion = 2;
inline constexpr int kReportSchemaVersion = 1;

struct CommandResult {
    int exit_code = kExitPass;
    nlohmann::json report;
    std::string summary;
    std::string chain_csv;   ///< empty when the command has no chain
    std::string ladder_csv;  ///< empty when the command has no ladder
};

struct IdentityCheck {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

CommandResult run_verify(const RunConfig& cfg);
/// `fault` is "" or "dA-sign" (flips the sign of dA inside the identity
/// checks). Throws ConfigError for an unknown fault name.
CommandResult run_identities(const RunConfig& cfg, const std::string& fault = "");
CommandResult run_eig(const RunConfig& cfg);
CommandResult run_norms(const RunConfig& cfg);

/// Dispatches by subcommand name; configuration errors become exit 1.
CommandResult run_command(const std::string& command, const RunConfig& cfg,
                          const std::string& fault = "");

/// Writes report.json (and chain.csv / ladder.csv when present) into `dir`.
void write_outputs(const CommandResult& result, const std::string& dir);

}  // namespace zm
