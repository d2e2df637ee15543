#include "bllimit/error.hpp"

namespace bll {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NonPositiveLength: return "NonPositiveLength";
        case ErrorKind::EndpointMismatch: return "EndpointMismatch";
        case ErrorKind::MultipleCriticalPoints: return "MultipleCriticalPoints";
        case ErrorKind::InvalidPolytropicExponent: return "InvalidPolytropicExponent";
        case ErrorKind::NonPhysicalParameter: return "NonPhysicalParameter";
        case ErrorKind::OutOfValidityRange: return "OutOfValidityRange";
        case ErrorKind::QuadratureNonConvergence: return "QuadratureNonConvergence";
        case ErrorKind::ValidityViolation: return "ValidityViolation";
        case ErrorKind::BracketFailure: return "BracketFailure";
        case ErrorKind::GridTooCoarse: return "GridTooCoarse";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::DegenerateDensity: return "DegenerateDensity";
        case ErrorKind::DegenerateMesh: return "DegenerateMesh";
        case ErrorKind::PathDependence: return "PathDependence";
        case ErrorKind::StationMismatch: return "StationMismatch";
        case ErrorKind::SolveFailure: return "SolveFailure";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

namespace {
std::string located(const std::string& message, std::size_t line, std::size_t column) {
    if (line == 0) return message;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}
}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(ErrorKind::ParseError, located(message, line, column)), line_(line), column_(column) {}

}  // namespace bll
