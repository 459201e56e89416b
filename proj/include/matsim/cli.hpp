#pragma once

#include "matsim/evaluation.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace matsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Parses argv-style arguments (args[0] is the program name), runs the
// subcommand and returns the exit status. Diagnostics go to err as a single
// line `matsim: <usage|data>: <reason>`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

// JSON array of reports, the format written by `regress`.
std::string reports_to_json(const std::vector<EvaluationReport>& reports);

} // namespace matsim::cli
