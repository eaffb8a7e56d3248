#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ridgeboost {

enum class ErrorKind {
  NotSymmetric,
  NotFactorizable,
  NoConvergence,
  DimensionMismatch,
  InvalidParameter,
  DegenerateData,
  EmptyData,
  EvaluationFailure,
  ConfigError,
  FileError,
  SchemaError,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind; the CLI maps kinds to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit code for an error kind: 2 config, 3 data, 4 numerical.
int exit_code_for(ErrorKind kind);

}  // namespace ridgeboost
