#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "smgcheck/smg.hpp"

namespace smgcheck {

// Explicit-state text format, one declaration per line, '#' starts a comment:
//
//   player <id> <name>
//   state <id> <owner>
//   action <state> <label>
//   trans <state> <label> <target>:<prob> [<target>:<prob> ...]
//   label "<name>" <state> [<state> ...]
//   reward "<name>" <state> <label> <value>
//   init <state>
//
// Player and state ids may be any distinct nonnegative integers; they are
// renumbered densely in declaration order. A `trans` line for an undeclared
// action declares it.

Smg read_model(std::istream& in);
Smg read_model_file(const std::filesystem::path& path);
void write_model(std::ostream& out, const Smg& g);

/// CSV `state,step,action`; step is `-` for memoryless entries.
void write_strategy_csv(std::ostream& out, const Smg& g, const Strategy& sigma);
/// When coalition is absent it is taken to be the owners of the listed states.
Strategy read_strategy_csv(std::istream& in, const Smg& g,
                           const std::optional<Coalition>& coalition = std::nullopt);

/// Shortest text that parses back to the same double; `inf` for infinity.
std::string format_number(double v);

}  // namespace smgcheck
