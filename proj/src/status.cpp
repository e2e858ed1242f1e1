#include "sfpbench/status.hpp"

namespace sfp {

std::string_view to_string(StatusCode c) {
  switch (c) {
    case StatusCode::Ok: return "OK";
    case StatusCode::ConfigInvalid: return "CONFIG_INVALID";
    case StatusCode::DuplicateName: return "DUPLICATE_NAME";
    case StatusCode::ResourceExhausted: return "RESOURCE_EXHAUSTED";
    case StatusCode::InvalidState: return "INVALID_STATE";
    case StatusCode::UnknownId: return "UNKNOWN_ID";
    case StatusCode::UnknownName: return "UNKNOWN_NAME";
    case StatusCode::TimedOut: return "TIMED_OUT";
    case StatusCode::Overflow: return "OVERFLOW";
    case StatusCode::Underflow: return "UNDERFLOW";
    case StatusCode::NotOwner: return "NOT_OWNER";
    case StatusCode::MsgTooLong: return "MSG_TOO_LONG";
    case StatusCode::NoMessage: return "NO_MESSAGE";
    case StatusCode::DirectionMismatch: return "DIRECTION_MISMATCH";
    case StatusCode::UnmatchedEnd: return "UNMATCHED_END";
    case StatusCode::LifecycleViolation: return "LIFECYCLE_VIOLATION";
    case StatusCode::EmptySeries: return "EMPTY_SERIES";
    case StatusCode::NegativeWeight: return "NEGATIVE_WEIGHT";
    case StatusCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case StatusCode::ImageTooSmall: return "IMAGE_TOO_SMALL";
    case StatusCode::UnknownCall: return "UNKNOWN_CALL";
  }
  return "UNKNOWN";
}

}  // namespace sfp
