#include "sfpbench/trace.hpp"

#include <cstdio>

namespace sfp {

const char* to_string(TraceKind k) {
  switch (k) {
    case TraceKind::Boot: return "BOOT";
    case TraceKind::WindowStart: return "WINDOW_START";
    case TraceKind::PartitionSwitch: return "PARTITION_SWITCH";
    case TraceKind::Dispatch: return "DISPATCH";
    case TraceKind::ProcessSwitch: return "PROCESS_SWITCH";
    case TraceKind::Preempt: return "PREEMPT";
    case TraceKind::Block: return "BLOCK";
    case TraceKind::Wake: return "WAKE";
    case TraceKind::Timeout: return "TIMEOUT";
    case TraceKind::ProcessCreate: return "PROCESS_CREATE";
    case TraceKind::ProcessStart: return "PROCESS_START";
    case TraceKind::ProcessEnd: return "PROCESS_END";
    case TraceKind::ModeChange: return "MODE_CHANGE";
    case TraceKind::Release: return "RELEASE";
    case TraceKind::DeadlineMiss: return "DEADLINE_MISS";
    case TraceKind::ErrorRaised: return "ERROR_RAISED";
    case TraceKind::HmAction: return "HM_ACTION";
    case TraceKind::IpcOp: return "IPC_OP";
    case TraceKind::Idle: return "IDLE";
  }
  return "UNKNOWN";
}

std::string format_trace_line(const TraceEvent& e,
                              const std::vector<std::string>& partition_names,
                              const std::vector<std::string>& process_names) {
  char head[64];
  std::snprintf(head, sizeof head, "%llu %s",
                static_cast<unsigned long long>(e.tick), to_string(e.kind));
  std::string line = head;
  line += ' ';
  if (e.partition >= 0 && static_cast<std::size_t>(e.partition) < partition_names.size())
    line += partition_names[e.partition];
  else
    line += '-';
  line += ' ';
  if (e.process >= 0 && static_cast<std::size_t>(e.process) < process_names.size())
    line += process_names[e.process];
  else
    line += '-';
  char tail[48];
  std::snprintf(tail, sizeof tail, " %llu %llu",
                static_cast<unsigned long long>(e.a),
                static_cast<unsigned long long>(e.b));
  line += tail;
  if (!e.label.empty()) {
    line += ' ';
    line += e.label;
  }
  return line;
}

std::string format_trace(const std::vector<TraceEvent>& events,
                         const std::vector<std::string>& partition_names,
                         const std::vector<std::string>& process_names) {
  std::string out;
  for (const auto& e : events) {
    out += format_trace_line(e, partition_names, process_names);
    out += '\n';
  }
  return out;
}

}  // namespace sfp
