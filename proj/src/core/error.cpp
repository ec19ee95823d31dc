#include "ttl/core/error.hpp"

namespace ttl {

std::string_view error_tag(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedConfig: return "MALFORMED_CONFIG";
    case ErrorCode::InvalidValue: return "INVALID_VALUE";
    case ErrorCode::IoFailure: return "IO_FAILURE";
    case ErrorCode::VersionMismatch: return "VERSION_MISMATCH";
    case ErrorCode::CorruptCheckpoint: return "CORRUPT_CHECKPOINT";
    case ErrorCode::MissingDistance: return "MISSING_DISTANCE";
    case ErrorCode::NonpositiveDistance: return "NONPOSITIVE_DISTANCE";
    case ErrorCode::EmptyClass: return "EMPTY_CLASS";
    case ErrorCode::InvalidSpec: return "INVALID_SPEC";
    case ErrorCode::ShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::NonFiniteInput: return "NON_FINITE_INPUT";
    case ErrorCode::LabelOutOfRange: return "LABEL_OUT_OF_RANGE";
    case ErrorCode::DataEmpty: return "DATA_EMPTY";
    case ErrorCode::FrozenViolation: return "FROZEN_VIOLATION";
    case ErrorCode::LabelLeak: return "LABEL_LEAK";
    case ErrorCode::FractionOutOfRange: return "FRACTION_OUT_OF_RANGE";
    case ErrorCode::NonFiniteGradient: return "NON_FINITE_GRADIENT";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::UnknownExtractor: return "UNKNOWN_EXTRACTOR";
    case ErrorCode::MissingCheckpoint: return "MISSING_CHECKPOINT";
    case ErrorCode::Diverged: return "DIVERGED";
  }
  return "UNKNOWN";
}

}  // namespace ttl
