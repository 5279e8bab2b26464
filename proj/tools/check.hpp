#pragma once

#include <cstdint>
#include <ostream>

namespace plgs::cli {

/// Runs the invariant suite on small problems, one line per check.
/// Returns the number of failed checks.
int run_checks(std::ostream& out, std::uint64_t seed);

}  // namespace plgs::cli
