#pragma once

#include <stdexcept>
#include <string>

namespace onebit {

/// An argument lies outside the domain of the requested operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// |rho| == 1 reached a formula that divides by 1 - rho^2.
class DegenerateCorrelationError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A result would leave the representable range (e.g. an outage
/// probability that underflows before a log is taken).
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Adaptive integration ran out of budget. Carries the best estimate
/// and its error bound so callers can decide whether to use it.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

}  // namespace onebit
