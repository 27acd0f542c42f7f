#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "lgt/problem.hpp"

namespace lgt {

/// Flags shared by the command-line subcommands.
struct CommandOptions {
    std::optional<int> grid;            // cells along the longer box side; else the problem's nx, ny
    double p = 2.0;
    double tau = 1.0;
    std::optional<std::uint64_t> seed;  // overrides the problem seed
    bool svg = false;
    bool pgm = false;
    // cex only
    int pairs = 20;
    std::string mode = "exact";
    int atoms = 64;
};

/// Exit codes of the command-line tool.
enum ExitCode { kOk = 0, kSchema = 2, kInfeasible = 3, kDivergent = 4, kInternal = 5 };

/// A report plus named output files; nothing is written to disk here.
struct CommandResult {
    nlohmann::json report;
    std::map<std::string, std::string> files;
    int exit_code = kOk;
};

CommandResult run_solve(const ProblemFile& problem, const CommandOptions& options);
CommandResult run_density(const ProblemFile& problem, const CommandOptions& options);
CommandResult run_lp_norm(const ProblemFile& problem, const CommandOptions& options);
CommandResult run_bound(const ProblemFile& problem, const CommandOptions& options);
CommandResult run_lsg(const ProblemFile& problem, const CommandOptions& options);
CommandResult run_cex(const CommandOptions& options);

}  // namespace lgt
