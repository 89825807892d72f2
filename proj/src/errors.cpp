#include "quanttm/errors.hpp"

namespace quanttm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::InvalidCurrency: return "InvalidCurrency";
    case ErrorCode::UnknownFactor: return "UnknownFactor";
    case ErrorCode::MissingEstimate: return "MissingEstimate";
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::MixedCurrency: return "MixedCurrency";
    case ErrorCode::RangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorCode::InvalidPolicy: return "InvalidPolicy";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::UnknownSchemaVersion: return "UnknownSchemaVersion";
    case ErrorCode::ValidationFailure: return "ValidationFailure";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::RevisionConflict: return "RevisionConflict";
    case ErrorCode::NotFound: return "NotFound";
  }
  return "Unknown";
}

}  // namespace quanttm
