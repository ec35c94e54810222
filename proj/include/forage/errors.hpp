#pragma once

#include <stdexcept>
#include <string>

namespace forage {

/// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// Raised for malformed scenario files, overrides and serialized genomes.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace forage
