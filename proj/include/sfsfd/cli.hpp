#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sfsfd::cli {

/// Runs the `sfsfd` command line (args excludes the program name). Returns
/// the process exit code: 0 on success, 1 on a runtime failure or a failed
/// benchmark cell, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads a headerless CSV design (one point per row). Throws
/// std::runtime_error naming the 1-based line of the first problem.
std::vector<std::vector<double>> read_design_csv(std::istream& in);

}  // namespace sfsfd::cli
