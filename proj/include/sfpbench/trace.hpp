#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sfp {

enum class TraceKind : std::uint8_t {
  Boot,
  WindowStart,      // a = window index within the frame, b = frame number
  PartitionSwitch,  // a = gap ticks (prev last exec -> first dispatch), b = outgoing partition
  Dispatch,
  ProcessSwitch,    // a = previous process id
  Preempt,          // a = preempting process id
  Block,            // label = object, a = object id
  Wake,             // a = 1 if woken by timeout path
  Timeout,
  ProcessCreate,
  ProcessStart,
  ProcessEnd,
  ModeChange,       // a = new mode
  Release,          // periodic release, a = release index
  DeadlineMiss,
  ErrorRaised,      // a = error code
  HmAction,         // a = action taken, b = error code
  IpcOp,            // label = call name
  Idle,             // a = ticks skipped
};

const char* to_string(TraceKind k);

struct TraceEvent {
  std::uint64_t tick = 0;
  TraceKind kind = TraceKind::Boot;
  std::int32_t partition = -1;  // -1: no partition context
  std::int32_t process = -1;    // -1: no process context
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::string label;
};

// One event per line: "<tick> <KIND> <partition|-> <process|-> <a> <b> [label]".
// Partition/process rendered as names when resolvers are given, ids otherwise.
std::string format_trace_line(const TraceEvent& e,
                              const std::vector<std::string>& partition_names,
                              const std::vector<std::string>& process_names);

std::string format_trace(const std::vector<TraceEvent>& events,
                         const std::vector<std::string>& partition_names,
                         const std::vector<std::string>& process_names);

}  // namespace sfp
