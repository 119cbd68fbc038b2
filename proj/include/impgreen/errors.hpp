#pragma once

#include <stdexcept>
#include <string>

namespace impgreen {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Source and target coincide (or nearly so); G is singular there.
class SingularInputError : public DomainError {
public:
    using DomainError::DomainError;
};

/// The integrand returned a non-finite value.
class IntegrandFailure : public std::runtime_error {
public:
    IntegrandFailure(const std::string& what, double abscissa)
        : std::runtime_error(what), abscissa_(abscissa) {}

    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

} // namespace impgreen
