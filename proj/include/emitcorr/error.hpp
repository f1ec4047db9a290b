#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emitcorr {

enum class ErrorKind {
    InvalidArgument,
    NonPhysicalState,
    SingularSeparation,
    OutsideApplicability,
    AnalyticFormUnavailable,
    InvalidBellDiagonal,
    ConditionalUndefined,
    NonXStructure,
    NumericalFailure,
    PropagationDiverged,
    ConfigParse,
};

/// Validation problems are caller mistakes; numerical ones come from the
/// integrator or eigen-solvers. The CLI maps them to exit codes 1 and 2.
inline bool is_numerical(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NumericalFailure:
    case ErrorKind::PropagationDiverged:
        return true;
    default:
        return false;
    }
}

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// A sampled state failed validation during propagation.
class PropagationError : public Error {
public:
    PropagationError(std::size_t sample, const std::string& what)
        : Error(ErrorKind::PropagationDiverged, what), sample_(sample) {}

    std::size_t sample() const noexcept { return sample_; }

private:
    std::size_t sample_;
};

} // namespace emitcorr
