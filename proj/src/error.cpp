// error.cpp

#include "nonmarkov/error.hpp"

namespace nonmarkov {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Branch: return "branch";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::SolverInstability: return "solver_instability";
    case ErrorKind::SingularWindow: return "singular_window";
    case ErrorKind::StepSize: return "step_size";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::Extent: return "extent";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

} // namespace nonmarkov
