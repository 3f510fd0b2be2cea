#pragma once

#include <stdexcept>
#include <string>

namespace coop_lms {

// Invalid parameters or unknown names (graph catalog, presets, schedules).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Random generation could not satisfy its postcondition (e.g. ER never connected).
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite input, indefinite factor, singular or ill-conditioned system.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what, double value = 0.0)
        : std::runtime_error(what), value_(value) {}

    // Offending quantity: a condition estimate or a minimum eigenvalue.
    double value() const noexcept { return value_; }

private:
    double value_;
};

// Caller misuse: mismatched lengths, malformed config fields.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Message-passing rule broken in the distributed simulation.
class ProtocolError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace coop_lms
