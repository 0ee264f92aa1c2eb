#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "hawkes/config.hpp"

namespace hawkes {

/// 0 pass, 1 config/usage, 2 statistical failure or under-powered, 3 I/O.
enum ExitCode : int { kExitPass = 0, kExitUsage = 1, kExitStatistical = 2, kExitIo = 3 };

struct CommandContext {
    RunConfig config;
    std::filesystem::path out_dir;
    std::size_t workers = 1;
    /// Destination for diagnostics; may be null.
    std::ostream* log = nullptr;
};

// Each command writes config.toml (the effective configuration) next to its
// outputs. estimate, fclt and lil reuse events.csv / compensator.csv from a
// prior `simulate` into the same directory; otherwise they simulate.

/// events.csv, compensator.csv
int cmd_simulate(const CommandContext& ctx);
/// stats.json, counts.csv
int cmd_estimate(const CommandContext& ctx);
/// report.json, fclt.csv
int cmd_fclt(const CommandContext& ctx);
/// lil_report.json, lil.csv
int cmd_lil(const CommandContext& ctx);
/// verify.json
int cmd_verify(const CommandContext& ctx);

/// Dispatches by name and maps exceptions to exit codes, writing the error
/// message to ctx.log.
int run_command(std::string_view name, const CommandContext& ctx);

}  // namespace hawkes
