#pragma once

#include <cstdint>
#include <string_view>

namespace sfp {

// Every fallible call in the library reports one of these. Values are
// spelled PascalCase internally; to_string() yields the screaming-snake
// names used by the CLI and the trace dump.
enum class StatusCode : std::uint8_t {
  Ok = 0,
  ConfigInvalid,
  DuplicateName,
  ResourceExhausted,
  InvalidState,
  UnknownId,
  UnknownName,
  TimedOut,
  Overflow,
  Underflow,
  NotOwner,
  MsgTooLong,
  NoMessage,
  DirectionMismatch,
  UnmatchedEnd,
  LifecycleViolation,
  EmptySeries,
  NegativeWeight,
  DimensionMismatch,
  ImageTooSmall,
  UnknownCall,
};

std::string_view to_string(StatusCode c);

// Minimal result wrapper: a status plus a value that is only meaningful
// when ok() holds. Kept trivially copyable so it can cross the green-thread
// boundary without surprises.
template <typename T>
struct Result {
  StatusCode status = StatusCode::Ok;
  T value{};

  bool ok() const { return status == StatusCode::Ok; }
  static Result failure(StatusCode c) { return Result{c, T{}}; }
  static Result success(T v) { return Result{StatusCode::Ok, static_cast<T&&>(v)}; }
};

}  // namespace sfp
