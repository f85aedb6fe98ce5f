// pipeline.hpp — Subcommand execution and output files
//
// Every subcommand runs once per configured bath and writes
// <name>_<command>_<bath label>.csv (verify writes <name>_verify.json).
// CSV headers echo the full config as `# `-prefixed TOML followed by a
// [provenance] table, so stripping the prefix re-parses to the same config.

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nmq/config.hpp"

namespace nmq {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { Rates, Evolve, CpCheck, Spectrum, Ramsey, Verify };

std::optional<Command> parse_command(std::string_view name);
std::string to_string(Command c);

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // cp-check verdict or verify failure
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct Column {
    std::string name;
    std::vector<double> values;
};

using Provenance = std::vector<std::pair<std::string, std::string>>;

// Header comment lines, column names, then rows of %.17g values.
std::string format_csv(const RunConfig& config, const Provenance& provenance,
                       const std::vector<Column>& columns);

// Inverse of the header part of format_csv: the `#` lines with the prefix removed.
std::string csv_header_config(std::string_view csv);

struct RunOutcome {
    int exit_code{kExitOk};
    std::vector<std::filesystem::path> files;
};

// Runs one subcommand. Progress and verdict lines go to `out`, diagnostics
// to `err`. Never throws for configuration or numerical failures; those map
// to kExitConfig and kExitNumerical.
RunOutcome run(Command command, const RunConfig& config, const std::filesystem::path& out_dir,
               std::ostream& out, std::ostream& err);

// Output sample times for the [grid] block.
std::vector<double> output_grid(const GridConfig& g);

} // namespace nmq
