#pragma once

// The command-line tool's commands. Each produces a CSV table, a plain-text
// report and, for wigner and tiles, an optional P5 graymap.

#include <array>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "compass/config.hpp"

namespace compass {

inline constexpr std::array<std::string_view, 6> kCommands = {"state",    "wigner",      "tiles",
                                                              "protocol", "hamiltonian", "sensitivity"};

struct CommandOutput {
  std::string name;
  std::string csv;
  std::string report;
  std::optional<std::string> heatmap;
};

/// Throws InvalidArgument for an unknown command name; library errors
/// propagate unchanged.
CommandOutput run_command(std::string_view name, const RunConfig& cfg);

/// Writes <name>.csv, <name>_report.txt and <name>.pgm into `dir`,
/// creating it if needed. Returns the paths written.
std::vector<std::filesystem::path> write_outputs(const CommandOutput& out, const std::filesystem::path& dir);

/// 17 significant digits, scientific notation.
std::string format_number(double v);

/// Binary P5 image of a slice, top row at the largest second-axis value,
/// grey level 255 (v + m) / (2 m) with m = max |W|.
std::string render_heatmap(const WignerSlice& slice);

/// Process exit status for an exception escaping run_command.
int exit_code_for(const std::exception& e);

}  // namespace compass
