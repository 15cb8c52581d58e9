#pragma once

#include <stdexcept>
#include <string>

namespace nwfl {

// Invalid configuration: bad keys, mismatched grids, malformed files.
// Maps to process exit code 3.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of an operation.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite state or other numerical breakdown. Maps to exit code 4.
struct numerical_failure : std::runtime_error {
    explicit numerical_failure(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failure. Maps to exit code 5.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace nwfl
