#pragma once

#include <stdexcept>
#include <string>

namespace plgs {

/// Invalid construction parameters (degenerate domain, bad resolution, bad config).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument outside the documented domain of an operation.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The field does not belong to the set an operation is defined on
/// (zero field, not in the admissible set, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A precondition the caller is responsible for was violated.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A numerical sub-procedure failed to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A hypothesis of the asymptotic theory does not hold for the given data.
class HypothesisViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace plgs
