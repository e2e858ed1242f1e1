#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <ucontext.h>
#include <vector>

#include "sfpbench/clock.hpp"
#include "sfpbench/config.hpp"
#include "sfpbench/status.hpp"
#include "sfpbench/trace.hpp"

namespace sfp {

using ProcessId = std::int32_t;
using PartitionId = std::int32_t;
using ObjectId = std::int32_t;

inline constexpr std::uint64_t kInfiniteTime = UINT64_MAX;

enum class ProcState : std::uint8_t { Dormant, Ready, Running, Waiting };
enum class PartitionMode : std::uint8_t { ColdStart, Normal, Idle };
enum class PortDirection : std::uint8_t { Source, Destination };

const char* to_string(ProcState s);
const char* to_string(PartitionMode m);

struct ProcessAttributes {
  std::string name;
  int priority = 0;  // 0..255, higher runs first
  std::optional<std::uint64_t> period_ticks;
  std::optional<std::uint64_t> deadline_ticks;  // defaults to the period
  std::uint64_t stack_budget = 16 * 1024;
  std::function<void()> entry;
};

struct ProcessStatusRec {
  ProcState state = ProcState::Dormant;
  int priority = 0;
  std::optional<std::uint64_t> period_ticks;
  std::uint64_t ready_since = 0;
};

struct PartitionStatusRec {
  PartitionId id = -1;
  PartitionMode mode = PartitionMode::ColdStart;
  std::uint64_t window_remaining_ticks = 0;
};

struct SemaphoreStatusRec {
  std::uint32_t value = 0;
  std::uint32_t waiters = 0;
};

struct EventStatusRec {
  bool up = false;
  std::uint32_t waiters = 0;
};

struct SamplingPortStatusRec {
  bool has_message = false;
  bool valid = false;
  std::uint64_t last_write_tick = 0;
  std::uint64_t refresh_period_ticks = 0;
};

struct QueuingPortStatusRec {
  std::uint32_t queued = 0;
  std::uint32_t capacity = 0;
  std::uint32_t send_waiters = 0;
  std::uint32_t receive_waiters = 0;
};

struct RunBounds {
  enum class Kind : std::uint8_t { Quiescent, Frames, Ticks };
  Kind kind = Kind::Quiescent;
  std::uint64_t n = 0;
  static RunBounds quiescent() { return {Kind::Quiescent, 0}; }
  static RunBounds frames(std::uint64_t n) { return {Kind::Frames, n}; }
  static RunBounds ticks(std::uint64_t n) { return {Kind::Ticks, n}; }
};

// Deterministic single-address-space executive. Partitions get a fixed cyclic
// schedule of windows inside a major frame; processes inside a partition are
// cooperative green threads dispatched by priority then FIFO. Every service
// call charges its modeled cost against the window budget, so a virtual-clock
// run is a pure function of configuration and program order.
class Kernel {
 public:
  struct SamplingRead {
    std::vector<std::uint8_t> message;
    bool valid = false;
  };

  explicit Kernel(SystemConfig config);
  ~Kernel();
  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  bool booted() const { return booted_; }
  const SystemConfig& config() const { return cfg_; }
  ClockMode clock_mode() const { return clock_.mode(); }

  // Raw clock reads bypass the cost model; measurement probes depend on that.
  std::uint64_t now_raw() const { return clock_.now_ticks(); }
  std::uint64_t probe_now() const { return clock_.now_ticks(); }

  // Free context query (not a service call): the partition of the running
  // process or partition init code, -1 outside both.
  PartitionId current_partition_id() const { return current_partition(); }

  void set_partition_entry(PartitionId partition, std::function<void()> entry);
  StatusCode run(RunBounds bounds);

  void enable_trace(bool on = true) { trace_enabled_ = on; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  std::string render_trace() const;
  const std::vector<std::uint64_t>& partition_switch_gaps() const { return gaps_; }

  // Process management
  Result<ProcessId> create_process(PartitionId partition, ProcessAttributes attrs);
  StatusCode start_process(ProcessId id);
  StatusCode set_priority(ProcessId id, int new_priority);
  Result<ProcessId> get_my_id() const;
  Result<ProcessId> get_process_id(std::string_view name) const;
  Result<ProcessStatusRec> get_process_status(ProcessId id) const;
  Result<PartitionStatusRec> get_partition_status() const;
  Result<std::uint64_t> get_current_ticks();
  StatusCode lock_preemption();
  StatusCode unlock_preemption();
  StatusCode periodic_wait();
  StatusCode yield();
  Result<HealthAction> raise_error(ErrorCode code);

  // Semaphores
  Result<ObjectId> create_semaphore(std::string_view name, std::uint32_t initial,
                                    std::uint32_t max_value);
  StatusCode wait_semaphore(ObjectId id, std::uint64_t timeout);
  StatusCode signal_semaphore(ObjectId id);
  Result<ObjectId> get_semaphore_id(std::string_view name) const;
  Result<SemaphoreStatusRec> get_semaphore_status(ObjectId id);

  // Events
  Result<ObjectId> create_event(std::string_view name);
  StatusCode set_event(ObjectId id);
  StatusCode reset_event(ObjectId id);
  StatusCode wait_event(ObjectId id, std::uint64_t timeout);
  Result<ObjectId> get_event_id(std::string_view name) const;
  Result<EventStatusRec> get_event_status(ObjectId id);

  // Mutexes
  Result<ObjectId> create_mutex(std::string_view name);
  StatusCode acquire_mutex(ObjectId id, std::uint64_t timeout);
  StatusCode release_mutex(ObjectId id);
  Result<ObjectId> get_mutex_id(std::string_view name) const;

  // Blackboards
  Result<ObjectId> create_blackboard(std::string_view name, std::uint32_t max_size);
  StatusCode display_blackboard(ObjectId id, std::span<const std::uint8_t> msg);
  Result<std::vector<std::uint8_t>> read_blackboard(ObjectId id, std::uint64_t timeout);
  StatusCode clear_blackboard(ObjectId id);
  Result<ObjectId> get_blackboard_id(std::string_view name) const;

  // Buffers
  Result<ObjectId> create_buffer(std::string_view name, std::uint32_t capacity,
                                 std::uint32_t max_size);
  StatusCode send_buffer(ObjectId id, std::span<const std::uint8_t> msg,
                         std::uint64_t timeout);
  Result<std::vector<std::uint8_t>> receive_buffer(ObjectId id, std::uint64_t timeout);
  Result<ObjectId> get_buffer_id(std::string_view name) const;

  // Sampling ports
  Result<ObjectId> create_sampling_port(std::string_view name, std::uint32_t max_size,
                                        PortDirection dir, std::uint64_t refresh_period);
  StatusCode write_sampling_message(ObjectId id, std::span<const std::uint8_t> msg);
  Result<SamplingRead> read_sampling_message(ObjectId id);
  Result<ObjectId> get_sampling_port_id(std::string_view name) const;
  Result<SamplingPortStatusRec> get_sampling_port_status(ObjectId id);

  // Queuing ports
  Result<ObjectId> create_queuing_port(std::string_view name, std::uint32_t capacity,
                                       std::uint32_t max_size, PortDirection dir);
  StatusCode send_queuing_message(ObjectId id, std::span<const std::uint8_t> msg,
                                  std::uint64_t timeout);
  Result<std::vector<std::uint8_t>> receive_queuing_message(ObjectId id,
                                                            std::uint64_t timeout);
  Result<ObjectId> get_queuing_port_id(std::string_view name) const;
  Result<QueuingPortStatusRec> get_queuing_port_status(ObjectId id);

 private:
  struct Pcb;
  struct Partition;
  struct Semaphore;
  struct EventObj;
  struct Mutex;
  struct Blackboard;
  struct BufferQueue;
  struct SamplingPort;
  struct QueuingPort;
  struct TimerEntry;
  enum class SuspendReason : std::uint8_t;
  enum class WaitKind : std::uint8_t;

  struct PendingHm {
    ErrorCode code = ErrorCode::ApplicationError;
    HealthAction action = HealthAction::Ignore;
    ProcessId source = -1;
    PartitionId partition = -1;
  };

  static void trampoline_process();
  static void trampoline_partition();
  static bool timer_after(const TimerEntry& a, const TimerEntry& b);

  static constexpr std::int32_t encode_port_id(ObjectId id, bool sampling) {
    return (id << 1) | (sampling ? 1 : 0);
  }
  static constexpr ObjectId decode_port_id(std::int32_t v) { return v >> 1; }
  static constexpr bool port_id_is_sampling(std::int32_t v) { return (v & 1) != 0; }

  bool in_process_context() const { return current_ >= 0; }
  PartitionId current_partition() const;

  void emit(TraceKind kind, PartitionId partition, ProcessId process,
            std::uint64_t a = 0, std::uint64_t b = 0, std::string label = {});

  void charge(std::uint64_t ticks);
  void charge_call(const char* op);
  void poll_host_boundary();

  void suspend_current(SuspendReason reason);
  void on_process_exit();
  void make_ready(Pcb& p, bool fresh_seq);
  ProcessId pick_ready(PartitionId partition) const;
  std::uint64_t next_timer_tick_for(PartitionId pid) const;
  void process_due_timers_for(PartitionId pid);
  bool advance_window();
  void switch_to_process(ProcessId pid);
  void run_partition_init(PartitionId pid);
  bool dispatch_once();
  bool quiescent() const;

  void arm_timeout(Pcb& p, std::uint64_t expire);
  void cancel_timer(Pcb& p);
  StatusCode block_current(WaitKind kind, ObjectId obj, std::uint64_t timeout,
                           std::vector<ProcessId>* queue);
  void wake_process(ProcessId id, StatusCode wake_status, bool from_timeout);
  void preempt_point();
  void release_waiters_of(std::vector<ProcessId>& waiters, StatusCode status);

  void apply_health_action(ErrorCode code, HealthAction action, ProcessId source,
                           PartitionId partition);
  void detach_from_wait(Pcb& p);
  void destroy_partition_objects(PartitionId pid);
  void restart_partition_state(PartitionId pid);
  void stop_partition_state(PartitionId pid);

  StatusCode charge_quota(PartitionId pid, std::uint64_t bytes);
  void refund_quota(PartitionId pid, std::uint64_t bytes);
  void build_context(Pcb& p);
  void start_pcb(Pcb& p);

  template <typename T>
  T* find_object(std::vector<std::unique_ptr<T>>& table, ObjectId id);

  SamplingPort* sampling_source_of(const std::string& dest_port);
  QueuingPort* queuing_source_of(const std::string& dest_port);

  SystemConfig cfg_;
  Clock clock_;
  bool booted_ = false;
  bool running_ = false;
  bool first_run_done_ = false;

  bool trace_enabled_ = false;
  std::vector<TraceEvent> trace_;
  std::vector<std::uint64_t> gaps_;

  std::vector<std::unique_ptr<Partition>> partitions_;
  std::vector<std::unique_ptr<Pcb>> pcbs_;
  std::map<std::string, std::int32_t, std::less<>> port_names_;
  std::vector<std::unique_ptr<Semaphore>> semaphores_;
  std::vector<std::unique_ptr<EventObj>> events_;
  std::vector<std::unique_ptr<Mutex>> mutexes_;
  std::vector<std::unique_ptr<Blackboard>> blackboards_;
  std::vector<std::unique_ptr<BufferQueue>> buffers_;
  std::vector<std::unique_ptr<SamplingPort>> sampling_ports_;
  std::vector<std::unique_ptr<QueuingPort>> queuing_ports_;

  std::size_t window_index_ = 0;
  std::uint64_t frame_ = 0;
  std::uint64_t window_start_ = 0;
  std::uint64_t window_end_ = 0;
  PartitionId window_owner_ = -1;

  PartitionId prev_window_owner_ = -1;
  std::uint64_t prev_last_exec_ = 0;
  bool gap_pending_ = false;
  std::uint64_t last_exec_tick_ = 0;

  ProcessId current_ = -1;
  PartitionId init_partition_ = -1;
  ProcessId last_dispatched_ = -1;
  std::uint64_t ready_seq_ = 0;
  std::uint64_t timer_seq_ = 0;
  std::uint64_t steps_ = 0;
  PendingHm pending_hm_;
  ucontext_t main_ctx_{};
};

}  // namespace sfp
