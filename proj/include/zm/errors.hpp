#pragma once

#include <stdexcept>
#include <string>

#include "zm/types.hpp"

namespace zm {

/// Input outside the mathematical domain of an operation (n too small,
/// non-antisymmetric two-form, even dimension for the zero-mode ansatz...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Division by |phi|^2 requested at a point where the spinor (nearly) vanishes.
class SingularPointError : public std::runtime_error {
public:
    SingularPointError(const std::string& what, Vec point)
        : std::runtime_error(what), point_(std::move(point)) {}
    const Vec& point() const { return point_; }

private:
    Vec point_;
};

/// A quadrature integrand produced NaN/inf.
class NonFiniteSample : public std::runtime_error {
public:
    NonFiniteSample(const std::string& what, Vec point)
        : std::runtime_error(what), point_(std::move(point)) {}
    const Vec& point() const { return point_; }

private:
    Vec point_;
};

/// Two quadrature resolutions (or a spectral ladder) disagree beyond tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A candidate pair failed the zero-mode admission gate.
class GateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace zm
