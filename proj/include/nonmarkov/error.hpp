// error.hpp: Error type shared by all nonmarkov modules

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nonmarkov {

enum class ErrorKind {
    Domain,             // argument outside the mathematical domain
    Numerical,          // quadrature or root finding did not converge
    Branch,             // evaluation requested exactly on a branch cut
    Consistency,        // a computed quantity violates a proven bound
    SolverInstability,  // time stepping diverged
    SingularWindow,     // master-equation coefficients diverge in the window
    StepSize,           // trace drift exceeded tolerance
    Truncation,         // Fock basis too small for the state
    Extent,             // phase-space grid does not cover the features
    Parse,              // scenario file rejected
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace nonmarkov
