#pragma once

#include <stdexcept>
#include <string>

namespace sqz {

// Scenario file could not be parsed or validated. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string message, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Adaptive integration could not proceed (step size underflow, non-finite
// right-hand side). Carries the last time that was reached successfully.
// Maps to CLI exit code 2.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& message, double last_good_time)
        : std::runtime_error(message), last_good_time_(last_good_time) {}
    double last_good_time() const { return last_good_time_; }

private:
    double last_good_time_;
};

// Phonon Fock-space truncation is too small for the requested evolution.
// Maps to CLI exit code 2.
class TruncationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sqz
