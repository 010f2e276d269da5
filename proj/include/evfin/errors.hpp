#pragma once

#include <stdexcept>
#include <string>

namespace evfin {

// Input violates a model invariant. `path` names the offending field when known.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& message, std::string path = {})
        : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

    // `message` already carries its location prefix.
    struct Located {};
    ValidationError(Located, const std::string& message, std::string path)
        : std::runtime_error(message), path_(std::move(path)) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// Argument outside the mathematical domain of an operation (rate <= -1, zero shares, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class OutOfRangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Cash-flow series without a sign change, or no root inside the search interval.
class NoIrrError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace evfin
