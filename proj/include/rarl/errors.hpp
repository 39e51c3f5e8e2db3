#pragma once

#include <stdexcept>
#include <string>

namespace rarl {

// Invalid scenario or CLI configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (e.g. stepping a finished episode).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Argument outside a formula's domain (non-positive distance, frequency, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace rarl
