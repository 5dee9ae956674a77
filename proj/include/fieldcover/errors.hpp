#pragma once

#include <stdexcept>
#include <string>

namespace fieldcover {

// Requested tolerance cannot be met by any sample placement (at or below the
// noise floor sigma0^2*sigma^2/(sigma0^2+sigma^2)).
class InfeasibleToleranceError : public std::runtime_error {
public:
    explicit InfeasibleToleranceError(const std::string& what) : std::runtime_error(what) {}
};

// Gram matrix factorization failed (noiseless duplicate samples).
class SingularSystemError : public std::runtime_error {
public:
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

// Instance exceeds a hard algorithmic size guard (e.g. exact TSP solver).
class SizeLimitError : public std::runtime_error {
public:
    explicit SizeLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed experiment configuration (bad JSON, unknown/duplicate keys,
// invariant violations). Message names the offending field.
class ConfigParseError : public std::runtime_error {
public:
    explicit ConfigParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fieldcover
