#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sfpbench/clock.hpp"
#include "sfpbench/cost_table.hpp"
#include "sfpbench/status.hpp"
#include "sfpbench/timebase.hpp"

namespace sfp {

inline constexpr std::uint32_t kProcessCapCeilingConfig = 128;

enum class ErrorCode : std::uint8_t {
  DeadlineMiss = 0,
  ApplicationError,
  NumericError,
  StackOverflow,
  IllegalRequest,
};
inline constexpr std::size_t kErrorCodeCount = 5;

enum class HealthAction : std::uint8_t {
  Ignore = 0,  // log the event, continue
  RestartProcess,
  RestartPartition,
  StopPartition,
};

const char* to_string(ErrorCode c);
const char* to_string(HealthAction a);
bool parse_error_code(std::string_view, ErrorCode*);
bool parse_health_action(std::string_view, HealthAction*);

struct HealthMonitorTable {
  std::array<HealthAction, kErrorCodeCount> actions{};  // default Ignore

  HealthAction action_for(ErrorCode c) const {
    return actions[static_cast<std::size_t>(c)];
  }
  void set(ErrorCode c, HealthAction a) {
    actions[static_cast<std::size_t>(c)] = a;
  }
};

struct PartitionConfig {
  std::string name;
  std::uint64_t memory_quota = 1 << 20;
};

struct ScheduleWindow {
  std::int32_t partition = -1;
  std::uint64_t offset = 0;
  std::uint64_t duration = 0;
};

// Static port wiring: messages written to `source_port` land in `dest_port`.
// Port names are a global namespace; the binding activates once both ports
// exist at runtime.
struct ChannelConfig {
  std::string source_port;
  std::string dest_port;
};

struct SystemConfig {
  ClockMode clock = ClockMode::Virtual;
  TickRate tick_rate{};
  CostTable costs{};
  HealthMonitorTable hm{};
  std::uint64_t major_frame_ticks = 10000;
  std::vector<PartitionConfig> partitions;
  std::vector<ScheduleWindow> windows;  // kept sorted by offset after validate
  std::vector<ChannelConfig> channels;
  std::uint32_t max_processes_per_partition = 32;
  bool runtime_process_creation = false;
  std::uint64_t seed = 1;

  std::int32_t partition_index(std::string_view name) const;

  // Checks the structural invariants (windows sorted, non-overlapping,
  // inside the major frame, referencing known partitions, every partition
  // scheduled) and normalizes window order. An entirely empty topology is
  // accepted: settings-only files carry just costs/rate/clock. On failure,
  // `error` describes the problem.
  StatusCode validate(std::string* error);
};

// Text format: one directive per line, '#' comments. See README for the full
// key list. Errors carry the 1-based line number.
StatusCode parse_config_text(std::string_view text, SystemConfig* out,
                             std::string* error);
StatusCode load_config_file(const std::string& path, SystemConfig* out,
                            std::string* error);

}  // namespace sfp
