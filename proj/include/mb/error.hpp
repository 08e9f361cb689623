#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mb {

enum class ErrorKind {
    InvariantViolation,
    ParseError,
    UnknownKey,
    ParameterOutOfRange,
    PoleOnContour,
    DivergentIntegrand,
    NonFiniteIntegrand,
    AliasingDetected,
    QuadratureUnderResolved,
    CompatibilityViolation,
    NoContraction,
    NotEnoughSignal,
    AlphaOne,
    SingularOperator,
    StepRejected,
    IoError,
};

std::string_view to_string(ErrorKind kind);

/// Library error carrying a kind and the offending field or node, if any.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string field, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& field() const noexcept { return field_; }

    /// One-line JSON record, used by the command-line tool on stderr.
    std::string record() const;

private:
    ErrorKind kind_;
    std::string field_;
};

[[noreturn]] void fail(ErrorKind kind, std::string field, const std::string& message);

}  // namespace mb
