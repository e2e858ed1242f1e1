#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sfpbench/cost_table.hpp"
#include "sfpbench/kernel.hpp"
#include "sfpbench/status.hpp"
#include "sfpbench/timebase.hpp"

namespace sfp {

// Everything a benchmark needs to describe a task, host-agnostically.
struct TaskSpec {
  std::string name;
  int priority = 0;
  std::optional<std::uint64_t> period_ticks;
  std::uint64_t stack_budget = 16 * 1024;
  std::function<void()> entry;
};

enum class WaitTarget : std::uint8_t { Semaphore, Event, Period };

struct RunSettings {
  ClockMode clock = ClockMode::Virtual;
  TickRate rate;
  CostTable costs;
  std::uint64_t seed = 1;
  bool with_stddev = true;
  std::uint64_t major_frame = 0;  // 0: derived from the declared windows
};

// State for one metric. Sample collection happens either through start/end
// pairs, through chained stamps (inter-task handoff timing), or through
// add_sample for externally computed durations; a context commits to one
// style on first use.
struct MeasureContext {
  enum class Phase : std::uint8_t { Declared, Ready, Validated };
  enum class Style : std::uint8_t { Unset, StartEnd, Chain, External };

  std::string name;
  std::vector<std::uint64_t> samples;
  Phase phase = Phase::Declared;
  Style style = Style::Unset;
  bool sample_open = false;
  std::uint64_t open_stamp = 0;
  bool chain_engaged = false;
  std::uint64_t chain_stamp = 0;
};

// What validate() leaves behind: the raw series plus its summary.
struct MetricRecord {
  NamedSeries series;
  SummaryStats stats;
};

// The abstraction layer the benchmark applications are written against.
// Binding it to the partitioned executive is one subclass; binding it to a
// recording stub (or a real RTOS) is another, with no benchmark changes.
class PerfHost {
 public:
  explicit PerfHost(RunSettings settings) : settings_(std::move(settings)) {}
  virtual ~PerfHost() = default;
  PerfHost(const PerfHost&) = delete;
  PerfHost& operator=(const PerfHost&) = delete;

  const RunSettings& settings() const { return settings_; }

  // --- topology, declared before run() ---
  virtual Result<PartitionId> declare_partition(std::string name,
                                                std::function<void()> entry) = 0;
  virtual StatusCode add_window(PartitionId partition, std::uint64_t offset,
                                std::uint64_t duration) = 0;
  virtual StatusCode set_major_frame(std::uint64_t ticks) = 0;
  virtual StatusCode add_channel(std::string source_port, std::string dest_port) = 0;
  virtual StatusCode run(RunBounds bounds) = 0;

  // --- task-side services ---
  virtual std::uint64_t now() = 0;  // the timer service call; it costs ticks
  virtual StatusCode yield() = 0;
  virtual Result<ProcessId> create_task(const TaskSpec& spec) = 0;
  virtual StatusCode wait_on(WaitTarget kind, ObjectId target, std::uint64_t timeout) = 0;
  virtual StatusCode set_priority(ProcessId id, int priority) = 0;
  virtual Result<ProcessId> get_my_id() = 0;
  virtual Result<ProcessId> get_process_id(std::string_view name) = 0;
  virtual Result<ProcessStatusRec> get_process_status(ProcessId id) = 0;
  virtual Result<PartitionStatusRec> get_partition_status() = 0;
  virtual StatusCode lock_preemption() = 0;
  virtual StatusCode unlock_preemption() = 0;

  virtual Result<ObjectId> create_semaphore(std::string_view name, std::uint32_t initial,
                                            std::uint32_t max_value) = 0;
  virtual StatusCode wait_semaphore(ObjectId id, std::uint64_t timeout) = 0;
  virtual StatusCode signal_semaphore(ObjectId id) = 0;
  virtual Result<ObjectId> get_semaphore_id(std::string_view name) = 0;
  virtual Result<SemaphoreStatusRec> get_semaphore_status(ObjectId id) = 0;

  virtual Result<ObjectId> create_event(std::string_view name) = 0;
  virtual StatusCode set_event(ObjectId id) = 0;
  virtual StatusCode reset_event(ObjectId id) = 0;
  virtual StatusCode wait_event(ObjectId id, std::uint64_t timeout) = 0;
  virtual Result<ObjectId> get_event_id(std::string_view name) = 0;
  virtual Result<EventStatusRec> get_event_status(ObjectId id) = 0;

  virtual Result<ObjectId> create_mutex(std::string_view name) = 0;
  virtual StatusCode acquire_mutex(ObjectId id, std::uint64_t timeout) = 0;
  virtual StatusCode release_mutex(ObjectId id) = 0;
  virtual Result<ObjectId> get_mutex_id(std::string_view name) = 0;

  virtual Result<ObjectId> create_blackboard(std::string_view name,
                                             std::uint32_t max_size) = 0;
  virtual StatusCode display_blackboard(ObjectId id, std::span<const std::uint8_t> msg) = 0;
  virtual Result<std::vector<std::uint8_t>> read_blackboard(ObjectId id,
                                                            std::uint64_t timeout) = 0;
  virtual Result<ObjectId> get_blackboard_id(std::string_view name) = 0;

  virtual Result<ObjectId> create_buffer(std::string_view name, std::uint32_t capacity,
                                         std::uint32_t max_size) = 0;
  virtual StatusCode send_buffer(ObjectId id, std::span<const std::uint8_t> msg,
                                 std::uint64_t timeout) = 0;
  virtual Result<std::vector<std::uint8_t>> receive_buffer(ObjectId id,
                                                           std::uint64_t timeout) = 0;
  virtual Result<ObjectId> get_buffer_id(std::string_view name) = 0;

  virtual Result<ObjectId> create_sampling_port(std::string_view name,
                                                std::uint32_t max_size, PortDirection dir,
                                                std::uint64_t refresh_period) = 0;
  virtual StatusCode write_sampling_message(ObjectId id,
                                            std::span<const std::uint8_t> msg) = 0;
  virtual Result<Kernel::SamplingRead> read_sampling_message(ObjectId id) = 0;
  virtual Result<ObjectId> get_sampling_port_id(std::string_view name) = 0;

  virtual Result<ObjectId> create_queuing_port(std::string_view name,
                                               std::uint32_t capacity,
                                               std::uint32_t max_size,
                                               PortDirection dir) = 0;
  virtual StatusCode send_queuing_message(ObjectId id, std::span<const std::uint8_t> msg,
                                          std::uint64_t timeout) = 0;
  virtual Result<std::vector<std::uint8_t>> receive_queuing_message(
      ObjectId id, std::uint64_t timeout) = 0;
  virtual Result<ObjectId> get_queuing_port_id(std::string_view name) = 0;
  virtual Result<QueuingPortStatusRec> get_queuing_port_status(ObjectId id) = 0;

  // --- measurement lifecycle ---
  // declare -> initialize (once) -> samples -> validate (once). Probes read
  // the clock directly and cost nothing; a sample is exactly the time the
  // measured code consumed between them.
  virtual MeasureContext declare_measure();
  virtual StatusCode initialize_measure(MeasureContext& ctx, std::string_view name);
  virtual StatusCode start_measure(MeasureContext& ctx);
  virtual StatusCode end_measure(MeasureContext& ctx);
  virtual StatusCode add_sample(MeasureContext& ctx, std::uint64_t ticks);
  virtual StatusCode chain_break(MeasureContext& ctx);
  virtual StatusCode chain_stamp(MeasureContext& ctx);
  virtual Result<SummaryStats> validate_measure(MeasureContext& ctx,
                                                bool std_variation_enable);

  // Gap between the last execution before a partition boundary and the first
  // dispatch after it, one entry per observed boundary with a partition change.
  virtual std::vector<std::uint64_t> partition_switch_gaps() = 0;

  const std::vector<MetricRecord>& collected() const { return collected_; }

 protected:
  virtual std::uint64_t probe_ticks() = 0;  // free clock read for probes

  RunSettings settings_;
  std::vector<MetricRecord> collected_;
};

// PerfHost bound to the partitioned executive.
class ApexHost : public PerfHost {
 public:
  explicit ApexHost(RunSettings settings);
  ~ApexHost() override;

  // Trace capture must be requested before the first run() call.
  void enable_trace(bool on = true) { trace_requested_ = on; }
  std::string render_trace() const;
  const Kernel* kernel() const { return kernel_.get(); }

  Result<PartitionId> declare_partition(std::string name,
                                        std::function<void()> entry) override;
  StatusCode add_window(PartitionId partition, std::uint64_t offset,
                        std::uint64_t duration) override;
  StatusCode set_major_frame(std::uint64_t ticks) override;
  StatusCode add_channel(std::string source_port, std::string dest_port) override;
  StatusCode run(RunBounds bounds) override;

  std::uint64_t now() override;
  StatusCode yield() override;
  Result<ProcessId> create_task(const TaskSpec& spec) override;
  StatusCode wait_on(WaitTarget kind, ObjectId target, std::uint64_t timeout) override;
  StatusCode set_priority(ProcessId id, int priority) override;
  Result<ProcessId> get_my_id() override;
  Result<ProcessId> get_process_id(std::string_view name) override;
  Result<ProcessStatusRec> get_process_status(ProcessId id) override;
  Result<PartitionStatusRec> get_partition_status() override;
  StatusCode lock_preemption() override;
  StatusCode unlock_preemption() override;

  Result<ObjectId> create_semaphore(std::string_view name, std::uint32_t initial,
                                    std::uint32_t max_value) override;
  StatusCode wait_semaphore(ObjectId id, std::uint64_t timeout) override;
  StatusCode signal_semaphore(ObjectId id) override;
  Result<ObjectId> get_semaphore_id(std::string_view name) override;
  Result<SemaphoreStatusRec> get_semaphore_status(ObjectId id) override;

  Result<ObjectId> create_event(std::string_view name) override;
  StatusCode set_event(ObjectId id) override;
  StatusCode reset_event(ObjectId id) override;
  StatusCode wait_event(ObjectId id, std::uint64_t timeout) override;
  Result<ObjectId> get_event_id(std::string_view name) override;
  Result<EventStatusRec> get_event_status(ObjectId id) override;

  Result<ObjectId> create_mutex(std::string_view name) override;
  StatusCode acquire_mutex(ObjectId id, std::uint64_t timeout) override;
  StatusCode release_mutex(ObjectId id) override;
  Result<ObjectId> get_mutex_id(std::string_view name) override;

  Result<ObjectId> create_blackboard(std::string_view name, std::uint32_t max_size) override;
  StatusCode display_blackboard(ObjectId id, std::span<const std::uint8_t> msg) override;
  Result<std::vector<std::uint8_t>> read_blackboard(ObjectId id,
                                                    std::uint64_t timeout) override;
  Result<ObjectId> get_blackboard_id(std::string_view name) override;

  Result<ObjectId> create_buffer(std::string_view name, std::uint32_t capacity,
                                 std::uint32_t max_size) override;
  StatusCode send_buffer(ObjectId id, std::span<const std::uint8_t> msg,
                         std::uint64_t timeout) override;
  Result<std::vector<std::uint8_t>> receive_buffer(ObjectId id,
                                                   std::uint64_t timeout) override;
  Result<ObjectId> get_buffer_id(std::string_view name) override;

  Result<ObjectId> create_sampling_port(std::string_view name, std::uint32_t max_size,
                                        PortDirection dir,
                                        std::uint64_t refresh_period) override;
  StatusCode write_sampling_message(ObjectId id, std::span<const std::uint8_t> msg) override;
  Result<Kernel::SamplingRead> read_sampling_message(ObjectId id) override;
  Result<ObjectId> get_sampling_port_id(std::string_view name) override;

  Result<ObjectId> create_queuing_port(std::string_view name, std::uint32_t capacity,
                                       std::uint32_t max_size, PortDirection dir) override;
  StatusCode send_queuing_message(ObjectId id, std::span<const std::uint8_t> msg,
                                  std::uint64_t timeout) override;
  Result<std::vector<std::uint8_t>> receive_queuing_message(ObjectId id,
                                                            std::uint64_t timeout) override;
  Result<ObjectId> get_queuing_port_id(std::string_view name) override;
  Result<QueuingPortStatusRec> get_queuing_port_status(ObjectId id) override;

  std::vector<std::uint64_t> partition_switch_gaps() override;

 protected:
  std::uint64_t probe_ticks() override;

 private:
  StatusCode boot();

  std::vector<std::string> partition_names_;
  std::vector<std::function<void()>> partition_entries_;
  std::vector<ScheduleWindow> windows_;
  std::vector<ChannelConfig> channels_;
  std::uint64_t major_frame_override_ = 0;
  bool trace_requested_ = false;
  std::unique_ptr<Kernel> kernel_;
};

}  // namespace sfp
