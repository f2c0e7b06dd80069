#pragma once

#include <stdexcept>
#include <string>

namespace fairband {

// Bad scenario files, grids too coarse for the requested scheme, infeasible
// construction parameters. Maps to exit code 2 in the CLI.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A solver failed to converge or produced non-finite values. Exit code 3.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fairband
