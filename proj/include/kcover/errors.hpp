#pragma once

#include <stdexcept>

namespace kcover {

// Filesystem-level failures; the CLI maps these to exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace kcover
