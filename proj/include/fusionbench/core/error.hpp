#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fusionbench {

enum class ErrorCode {
  MissingFile,
  UnsupportedFormat,
  CorruptData,
  IoFailure,
  SchemaViolation,
  DuplicatePairId,
  DanglingPath,
  NotAligned,
  DimensionMismatch,
  ImageTooSmall,
  InvalidImage,
  SingularHomography,
  EmptyOverlap,
  MalformedLine,
  OutOfRangeValue,
  MissingImageEntry,
  NoAnnotatedImages,
  CommandFailed,
  MissingSidecar,
  NoTimingData,
  UnknownPairId,
  EmptyCell,
  MissingFusedImage,
  DuplicateRecord,
  InvalidArgument,
  InvariantViolation,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptData: return "CorruptData";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::DuplicatePairId: return "DuplicatePairId";
    case ErrorCode::DanglingPath: return "DanglingPath";
    case ErrorCode::NotAligned: return "NotAligned";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::InvalidImage: return "InvalidImage";
    case ErrorCode::SingularHomography: return "SingularHomography";
    case ErrorCode::EmptyOverlap: return "EmptyOverlap";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::OutOfRangeValue: return "OutOfRangeValue";
    case ErrorCode::MissingImageEntry: return "MissingImageEntry";
    case ErrorCode::NoAnnotatedImages: return "NoAnnotatedImages";
    case ErrorCode::CommandFailed: return "CommandFailed";
    case ErrorCode::MissingSidecar: return "MissingSidecar";
    case ErrorCode::NoTimingData: return "NoTimingData";
    case ErrorCode::UnknownPairId: return "UnknownPairId";
    case ErrorCode::EmptyCell: return "EmptyCell";
    case ErrorCode::MissingFusedImage: return "MissingFusedImage";
    case ErrorCode::DuplicateRecord: return "DuplicateRecord";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

/// Process exit status for a failure of the given kind:
/// 1 validation failure, 2 I/O error, 3 internal invariant violation.
constexpr int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingFile:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::CorruptData:
    case ErrorCode::IoFailure:
    case ErrorCode::CommandFailed:
    case ErrorCode::MissingSidecar:
      return 2;
    case ErrorCode::InvariantViolation:
      return 3;
    default:
      return 1;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fusionbench
