#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <jpk/numerics.hpp>

namespace jpk::cli {

enum ExitCode : int {
    ok = 0,
    verification_failed = 1,
    bad_arguments = 2,
    evaluation_error = 3,
};

/// Runs the jpk command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads key=value lines (k_max, tail_tol, quad_rel_tol, quad_max_subdiv) over `base`.
/// Blank lines and lines starting with '#' are skipped. Throws DomainError on unknown keys
/// or unparsable values.
SeriesQuadConfig load_config(const std::string& path, SeriesQuadConfig base = {});

/// "v" -> {v}; "a:b:steps" -> steps equispaced points from a to b inclusive.
std::vector<double> parse_points(const std::string& spec);

} // namespace jpk::cli
