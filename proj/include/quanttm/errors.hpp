#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace quanttm {

enum class ErrorCode {
  DuplicateId,
  DanglingReference,
  ProbabilityOutOfRange,
  InvalidValue,
  InvalidCurrency,
  UnknownFactor,
  MissingEstimate,
  NonPositiveRate,
  MixedCurrency,
  RangeOutOfBounds,
  InvalidPolicy,
  MalformedDocument,
  UnknownSchemaVersion,
  ValidationFailure,
  IoFailure,
  RevisionConflict,
  NotFound,
};

std::string_view to_string(ErrorCode code);

// Base exception for every domain failure. `path` names the offending
// entity (e.g. "links[2].p_initiation") when one is known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string path = {})
      : std::runtime_error(std::move(message)), code_(code), path_(std::move(path)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& path() const noexcept { return path_; }

 private:
  ErrorCode code_;
  std::string path_;
};

// A broken invariant reported as data rather than thrown.
struct Violation {
  ErrorCode code;
  std::string path;
  std::string message;

  bool operator==(const Violation&) const = default;
};

}  // namespace quanttm
