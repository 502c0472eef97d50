#pragma once

#include <stdexcept>

namespace uscg {

/// Raised when a computation produces non-finite values.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Command-line entry point: subcommands phantom | project | reconstruct |
/// map | metrics | bench. Returns 0 on success, 1 on input errors, 2 on
/// numerical failure.
int cli(int argc, const char* const* argv);

}  // namespace uscg
