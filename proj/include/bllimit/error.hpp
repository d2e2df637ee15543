#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bll {

enum class ErrorKind {
    NonPositiveLength,
    EndpointMismatch,
    MultipleCriticalPoints,
    InvalidPolytropicExponent,
    NonPhysicalParameter,
    OutOfValidityRange,
    QuadratureNonConvergence,
    ValidityViolation,
    BracketFailure,
    GridTooCoarse,
    NonConvergence,
    GridMismatch,
    DegenerateDensity,
    DegenerateMesh,
    PathDependence,
    StationMismatch,
    SolveFailure,
    IoError,
    ParseError,
    ValidationError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// config errors carry a location (1-based; 0 means unknown)
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace bll
