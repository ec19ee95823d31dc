#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ttl {

enum class ErrorCode {
  MalformedConfig,
  InvalidValue,
  IoFailure,
  VersionMismatch,
  CorruptCheckpoint,
  MissingDistance,
  NonpositiveDistance,
  EmptyClass,
  InvalidSpec,
  ShapeMismatch,
  NonFiniteInput,
  LabelOutOfRange,
  DataEmpty,
  FrozenViolation,
  LabelLeak,
  FractionOutOfRange,
  NonFiniteGradient,
  DimensionMismatch,
  UnknownExtractor,
  MissingCheckpoint,
  Diverged,
};

/// Stable upper-case tag, e.g. "CORRUPT_CHECKPOINT". Used on stderr by the CLI.
std::string_view error_tag(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_tag(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ttl
