#include "mb/error.hpp"

#include <json.hpp>

namespace mb {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvariantViolation: return "InvariantViolation";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::UnknownKey: return "UnknownKey";
        case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorKind::PoleOnContour: return "PoleOnContour";
        case ErrorKind::DivergentIntegrand: return "DivergentIntegrand";
        case ErrorKind::NonFiniteIntegrand: return "NonFiniteIntegrand";
        case ErrorKind::AliasingDetected: return "AliasingDetected";
        case ErrorKind::QuadratureUnderResolved: return "QuadratureUnderResolved";
        case ErrorKind::CompatibilityViolation: return "CompatibilityViolation";
        case ErrorKind::NoContraction: return "NoContraction";
        case ErrorKind::NotEnoughSignal: return "NotEnoughSignal";
        case ErrorKind::AlphaOne: return "AlphaOne";
        case ErrorKind::SingularOperator: return "SingularOperator";
        case ErrorKind::StepRejected: return "StepRejected";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, std::string field, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + (field.empty() ? "" : " [" + field + "]") +
                         ": " + message),
      kind_(kind),
      field_(std::move(field)) {}

std::string Error::record() const {
    nlohmann::json j;
    j["error"] = std::string(to_string(kind_));
    j["field"] = field_;
    j["message"] = what();
    return j.dump();
}

void fail(ErrorKind kind, std::string field, const std::string& message) {
    throw Error(kind, std::move(field), message);
}

}  // namespace mb
