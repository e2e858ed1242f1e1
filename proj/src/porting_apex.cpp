#include "sfpbench/porting.hpp"

#include <algorithm>
#include <cassert>

namespace sfp {

// --------------------------------------------------- measurement lifecycle

MeasureContext PerfHost::declare_measure() { return MeasureContext{}; }

StatusCode PerfHost::initialize_measure(MeasureContext& ctx, std::string_view name) {
  if (ctx.phase != MeasureContext::Phase::Declared) return StatusCode::LifecycleViolation;
  if (name.empty()) return StatusCode::ConfigInvalid;
  ctx.name = std::string(name);
  ctx.phase = MeasureContext::Phase::Ready;
  return StatusCode::Ok;
}

StatusCode PerfHost::start_measure(MeasureContext& ctx) {
  if (ctx.phase != MeasureContext::Phase::Ready) return StatusCode::LifecycleViolation;
  if (ctx.style == MeasureContext::Style::Chain) return StatusCode::LifecycleViolation;
  if (ctx.sample_open) return StatusCode::LifecycleViolation;
  ctx.style = MeasureContext::Style::StartEnd;
  ctx.sample_open = true;
  ctx.open_stamp = probe_ticks();
  return StatusCode::Ok;
}

StatusCode PerfHost::end_measure(MeasureContext& ctx) {
  if (ctx.phase != MeasureContext::Phase::Ready || !ctx.sample_open)
    return StatusCode::UnmatchedEnd;
  std::uint64_t t = probe_ticks();
  ctx.samples.push_back(t - ctx.open_stamp);
  ctx.sample_open = false;
  return StatusCode::Ok;
}

StatusCode PerfHost::add_sample(MeasureContext& ctx, std::uint64_t ticks) {
  if (ctx.phase != MeasureContext::Phase::Ready) return StatusCode::LifecycleViolation;
  if (ctx.style == MeasureContext::Style::Unset)
    ctx.style = MeasureContext::Style::External;
  ctx.samples.push_back(ticks);
  return StatusCode::Ok;
}

StatusCode PerfHost::chain_break(MeasureContext& ctx) {
  if (ctx.phase != MeasureContext::Phase::Ready) return StatusCode::LifecycleViolation;
  if (ctx.style == MeasureContext::Style::StartEnd) return StatusCode::LifecycleViolation;
  ctx.style = MeasureContext::Style::Chain;
  ctx.chain_engaged = false;
  return StatusCode::Ok;
}

StatusCode PerfHost::chain_stamp(MeasureContext& ctx) {
  if (ctx.phase != MeasureContext::Phase::Ready) return StatusCode::LifecycleViolation;
  if (ctx.style == MeasureContext::Style::StartEnd) return StatusCode::LifecycleViolation;
  ctx.style = MeasureContext::Style::Chain;
  std::uint64_t t = probe_ticks();
  if (ctx.chain_engaged) ctx.samples.push_back(t - ctx.chain_stamp);
  ctx.chain_stamp = t;
  ctx.chain_engaged = true;
  return StatusCode::Ok;
}

Result<SummaryStats> PerfHost::validate_measure(MeasureContext& ctx,
                                                bool std_variation_enable) {
  using R = Result<SummaryStats>;
  if (ctx.phase != MeasureContext::Phase::Ready) return R::failure(StatusCode::LifecycleViolation);
  if (ctx.sample_open) return R::failure(StatusCode::LifecycleViolation);
  if (ctx.samples.empty()) return R::failure(StatusCode::EmptySeries);
  auto stats = summarize(ctx.samples, settings_.rate, std_variation_enable);
  if (!stats.ok()) return stats;
  assert(stats.value.bcet_ticks <= stats.value.avg_ticks + 0.5 &&
         stats.value.avg_ticks <= static_cast<double>(stats.value.wcet_ticks) + 0.5);
  ctx.phase = MeasureContext::Phase::Validated;
  collected_.push_back(MetricRecord{{std::move(ctx.name), std::move(ctx.samples)},
                                    stats.value});
  return stats;
}

// ---------------------------------------------------------------- ApexHost

ApexHost::ApexHost(RunSettings settings) : PerfHost(std::move(settings)) {}
ApexHost::~ApexHost() = default;

Result<PartitionId> ApexHost::declare_partition(std::string name,
                                                std::function<void()> entry) {
  using R = Result<PartitionId>;
  if (kernel_) return R::failure(StatusCode::InvalidState);
  if (name.empty() || !entry) return R::failure(StatusCode::ConfigInvalid);
  for (const auto& n : partition_names_)
    if (n == name) return R::failure(StatusCode::DuplicateName);
  partition_names_.push_back(std::move(name));
  partition_entries_.push_back(std::move(entry));
  return R::success(static_cast<PartitionId>(partition_names_.size() - 1));
}

StatusCode ApexHost::add_window(PartitionId partition, std::uint64_t offset,
                                std::uint64_t duration) {
  if (kernel_) return StatusCode::InvalidState;
  if (partition < 0 || static_cast<std::size_t>(partition) >= partition_names_.size())
    return StatusCode::UnknownId;
  windows_.push_back({partition, offset, duration});
  return StatusCode::Ok;
}

StatusCode ApexHost::set_major_frame(std::uint64_t ticks) {
  if (kernel_) return StatusCode::InvalidState;
  if (ticks == 0) return StatusCode::ConfigInvalid;
  major_frame_override_ = ticks;
  return StatusCode::Ok;
}

StatusCode ApexHost::add_channel(std::string source_port, std::string dest_port) {
  if (kernel_) return StatusCode::InvalidState;
  if (source_port.empty() || dest_port.empty()) return StatusCode::ConfigInvalid;
  channels_.push_back({std::move(source_port), std::move(dest_port)});
  return StatusCode::Ok;
}

StatusCode ApexHost::boot() {
  if (partition_names_.empty()) return StatusCode::ConfigInvalid;

  SystemConfig cfg;
  cfg.clock = settings_.clock;
  cfg.tick_rate = settings_.rate;
  cfg.costs = settings_.costs;
  cfg.seed = settings_.seed;
  for (const auto& name : partition_names_)
    cfg.partitions.push_back({name, 1ull << 28});
  cfg.channels = channels_;

  if (windows_.empty()) {
    // One generously sized window per partition, so single-partition runs
    // never see a boundary unless the benchmark asked for one.
    constexpr std::uint64_t kAutoWindow = 1ull << 40;
    for (std::size_t i = 0; i < partition_names_.size(); ++i)
      cfg.windows.push_back(
          {static_cast<PartitionId>(i), i * kAutoWindow, kAutoWindow});
    cfg.major_frame_ticks = partition_names_.size() * kAutoWindow;
  } else {
    cfg.windows = windows_;
    std::uint64_t span = 0;
    for (const auto& w : cfg.windows) span = std::max(span, w.offset + w.duration);
    cfg.major_frame_ticks = span;
  }
  if (major_frame_override_ > 0) {
    if (settings_.major_frame > 0 && settings_.major_frame != major_frame_override_)
      return StatusCode::ConfigInvalid;
    cfg.major_frame_ticks = major_frame_override_;
  } else if (settings_.major_frame > 0) {
    cfg.major_frame_ticks = settings_.major_frame;
  }

  kernel_ = std::make_unique<Kernel>(std::move(cfg));
  if (!kernel_->booted()) {
    kernel_.reset();
    return StatusCode::ConfigInvalid;
  }
  kernel_->enable_trace(trace_requested_);
  for (std::size_t i = 0; i < partition_entries_.size(); ++i)
    kernel_->set_partition_entry(static_cast<PartitionId>(i), partition_entries_[i]);
  return StatusCode::Ok;
}

StatusCode ApexHost::run(RunBounds bounds) {
  if (!kernel_) {
    StatusCode st = boot();
    if (st != StatusCode::Ok) return st;
  }
  return kernel_->run(bounds);
}

std::string ApexHost::render_trace() const {
  return kernel_ ? kernel_->render_trace() : std::string{};
}

std::uint64_t ApexHost::probe_ticks() { return kernel_ ? kernel_->probe_now() : 0; }

std::uint64_t ApexHost::now() {
  if (!kernel_) return 0;
  auto r = kernel_->get_current_ticks();
  return r.ok() ? r.value : 0;
}

StatusCode ApexHost::yield() {
  return kernel_ ? kernel_->yield() : StatusCode::InvalidState;
}

Result<ProcessId> ApexHost::create_task(const TaskSpec& spec) {
  using R = Result<ProcessId>;
  if (!kernel_) return R::failure(StatusCode::InvalidState);
  PartitionId partition = kernel_->current_partition_id();
  if (partition < 0) return R::failure(StatusCode::InvalidState);
  ProcessAttributes attrs;
  attrs.name = spec.name;
  attrs.priority = spec.priority;
  attrs.period_ticks = spec.period_ticks;
  attrs.stack_budget = spec.stack_budget;
  attrs.entry = spec.entry;
  auto created = kernel_->create_process(partition, std::move(attrs));
  if (!created.ok()) return created;
  StatusCode st = kernel_->start_process(created.value);
  if (st != StatusCode::Ok) return R::failure(st);
  return created;
}

StatusCode ApexHost::wait_on(WaitTarget kind, ObjectId target, std::uint64_t timeout) {
  if (!kernel_) return StatusCode::InvalidState;
  switch (kind) {
    case WaitTarget::Semaphore: return kernel_->wait_semaphore(target, timeout);
    case WaitTarget::Event: return kernel_->wait_event(target, timeout);
    case WaitTarget::Period: return kernel_->periodic_wait();
  }
  return StatusCode::ConfigInvalid;
}

StatusCode ApexHost::set_priority(ProcessId id, int priority) {
  return kernel_ ? kernel_->set_priority(id, priority) : StatusCode::InvalidState;
}

Result<ProcessId> ApexHost::get_my_id() {
  if (!kernel_) return Result<ProcessId>::failure(StatusCode::InvalidState);
  return kernel_->get_my_id();
}

Result<ProcessId> ApexHost::get_process_id(std::string_view name) {
  if (!kernel_) return Result<ProcessId>::failure(StatusCode::InvalidState);
  return kernel_->get_process_id(name);
}

Result<ProcessStatusRec> ApexHost::get_process_status(ProcessId id) {
  if (!kernel_) return Result<ProcessStatusRec>::failure(StatusCode::InvalidState);
  return kernel_->get_process_status(id);
}

Result<PartitionStatusRec> ApexHost::get_partition_status() {
  if (!kernel_) return Result<PartitionStatusRec>::failure(StatusCode::InvalidState);
  return kernel_->get_partition_status();
}

StatusCode ApexHost::lock_preemption() {
  return kernel_ ? kernel_->lock_preemption() : StatusCode::InvalidState;
}

StatusCode ApexHost::unlock_preemption() {
  return kernel_ ? kernel_->unlock_preemption() : StatusCode::InvalidState;
}

Result<ObjectId> ApexHost::create_semaphore(std::string_view name, std::uint32_t initial,
                                            std::uint32_t max_value) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->create_semaphore(name, initial, max_value);
}

StatusCode ApexHost::wait_semaphore(ObjectId id, std::uint64_t timeout) {
  return kernel_ ? kernel_->wait_semaphore(id, timeout) : StatusCode::InvalidState;
}

StatusCode ApexHost::signal_semaphore(ObjectId id) {
  return kernel_ ? kernel_->signal_semaphore(id) : StatusCode::InvalidState;
}

Result<ObjectId> ApexHost::get_semaphore_id(std::string_view name) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->get_semaphore_id(name);
}

Result<SemaphoreStatusRec> ApexHost::get_semaphore_status(ObjectId id) {
  if (!kernel_) return Result<SemaphoreStatusRec>::failure(StatusCode::InvalidState);
  return kernel_->get_semaphore_status(id);
}

Result<ObjectId> ApexHost::create_event(std::string_view name) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->create_event(name);
}

StatusCode ApexHost::set_event(ObjectId id) {
  return kernel_ ? kernel_->set_event(id) : StatusCode::InvalidState;
}

StatusCode ApexHost::reset_event(ObjectId id) {
  return kernel_ ? kernel_->reset_event(id) : StatusCode::InvalidState;
}

StatusCode ApexHost::wait_event(ObjectId id, std::uint64_t timeout) {
  return kernel_ ? kernel_->wait_event(id, timeout) : StatusCode::InvalidState;
}

Result<ObjectId> ApexHost::get_event_id(std::string_view name) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->get_event_id(name);
}

Result<EventStatusRec> ApexHost::get_event_status(ObjectId id) {
  if (!kernel_) return Result<EventStatusRec>::failure(StatusCode::InvalidState);
  return kernel_->get_event_status(id);
}

Result<ObjectId> ApexHost::create_mutex(std::string_view name) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->create_mutex(name);
}

StatusCode ApexHost::acquire_mutex(ObjectId id, std::uint64_t timeout) {
  return kernel_ ? kernel_->acquire_mutex(id, timeout) : StatusCode::InvalidState;
}

StatusCode ApexHost::release_mutex(ObjectId id) {
  return kernel_ ? kernel_->release_mutex(id) : StatusCode::InvalidState;
}

Result<ObjectId> ApexHost::get_mutex_id(std::string_view name) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->get_mutex_id(name);
}

Result<ObjectId> ApexHost::create_blackboard(std::string_view name, std::uint32_t max_size) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->create_blackboard(name, max_size);
}

StatusCode ApexHost::display_blackboard(ObjectId id, std::span<const std::uint8_t> msg) {
  return kernel_ ? kernel_->display_blackboard(id, msg) : StatusCode::InvalidState;
}

Result<std::vector<std::uint8_t>> ApexHost::read_blackboard(ObjectId id,
                                                            std::uint64_t timeout) {
  if (!kernel_)
    return Result<std::vector<std::uint8_t>>::failure(StatusCode::InvalidState);
  return kernel_->read_blackboard(id, timeout);
}

Result<ObjectId> ApexHost::get_blackboard_id(std::string_view name) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->get_blackboard_id(name);
}

Result<ObjectId> ApexHost::create_buffer(std::string_view name, std::uint32_t capacity,
                                         std::uint32_t max_size) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->create_buffer(name, capacity, max_size);
}

StatusCode ApexHost::send_buffer(ObjectId id, std::span<const std::uint8_t> msg,
                                 std::uint64_t timeout) {
  return kernel_ ? kernel_->send_buffer(id, msg, timeout) : StatusCode::InvalidState;
}

Result<std::vector<std::uint8_t>> ApexHost::receive_buffer(ObjectId id,
                                                           std::uint64_t timeout) {
  if (!kernel_)
    return Result<std::vector<std::uint8_t>>::failure(StatusCode::InvalidState);
  return kernel_->receive_buffer(id, timeout);
}

Result<ObjectId> ApexHost::get_buffer_id(std::string_view name) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->get_buffer_id(name);
}

Result<ObjectId> ApexHost::create_sampling_port(std::string_view name,
                                                std::uint32_t max_size, PortDirection dir,
                                                std::uint64_t refresh_period) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->create_sampling_port(name, max_size, dir, refresh_period);
}

StatusCode ApexHost::write_sampling_message(ObjectId id,
                                            std::span<const std::uint8_t> msg) {
  return kernel_ ? kernel_->write_sampling_message(id, msg) : StatusCode::InvalidState;
}

Result<Kernel::SamplingRead> ApexHost::read_sampling_message(ObjectId id) {
  if (!kernel_) return Result<Kernel::SamplingRead>::failure(StatusCode::InvalidState);
  return kernel_->read_sampling_message(id);
}

Result<ObjectId> ApexHost::get_sampling_port_id(std::string_view name) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->get_sampling_port_id(name);
}

Result<ObjectId> ApexHost::create_queuing_port(std::string_view name,
                                               std::uint32_t capacity,
                                               std::uint32_t max_size, PortDirection dir) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->create_queuing_port(name, capacity, max_size, dir);
}

StatusCode ApexHost::send_queuing_message(ObjectId id, std::span<const std::uint8_t> msg,
                                          std::uint64_t timeout) {
  return kernel_ ? kernel_->send_queuing_message(id, msg, timeout)
                 : StatusCode::InvalidState;
}

Result<std::vector<std::uint8_t>> ApexHost::receive_queuing_message(ObjectId id,
                                                                    std::uint64_t timeout) {
  if (!kernel_)
    return Result<std::vector<std::uint8_t>>::failure(StatusCode::InvalidState);
  return kernel_->receive_queuing_message(id, timeout);
}

Result<ObjectId> ApexHost::get_queuing_port_id(std::string_view name) {
  if (!kernel_) return Result<ObjectId>::failure(StatusCode::InvalidState);
  return kernel_->get_queuing_port_id(name);
}

Result<QueuingPortStatusRec> ApexHost::get_queuing_port_status(ObjectId id) {
  if (!kernel_) return Result<QueuingPortStatusRec>::failure(StatusCode::InvalidState);
  return kernel_->get_queuing_port_status(id);
}

std::vector<std::uint64_t> ApexHost::partition_switch_gaps() {
  return kernel_ ? kernel_->partition_switch_gaps() : std::vector<std::uint64_t>{};
}

}  // namespace sfp
