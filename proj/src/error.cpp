#include "ridgeboost/error.hpp"

namespace ridgeboost {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotFactorizable: return "NotFactorizable";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::EmptyData: return "EmptyData";
    case ErrorKind::EvaluationFailure: return "EvaluationFailure";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::FileError: return "FileError";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidParameter:
      return 2;
    case ErrorKind::FileError:
    case ErrorKind::SchemaError:
    case ErrorKind::EmptyData:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::DegenerateData:
      return 3;
    case ErrorKind::NotSymmetric:
    case ErrorKind::NotFactorizable:
    case ErrorKind::NoConvergence:
    case ErrorKind::EvaluationFailure:
      return 4;
  }
  return 1;
}

}  // namespace ridgeboost
