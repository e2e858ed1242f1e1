#include "sfpbench/kernel.hpp"

#include <algorithm>
#include <deque>

namespace sfp {

namespace {
constexpr std::size_t kStackBytes = 256 * 1024;
constexpr std::uint64_t kStepCap = 50'000'000;

// Single active kernel while run() is live; the ucontext trampolines have no
// argument channel, so they reach it through this. The loop is strictly
// single-threaded.
Kernel* g_active = nullptr;
}  // namespace

const char* to_string(ProcState s) {
  switch (s) {
    case ProcState::Dormant: return "DORMANT";
    case ProcState::Ready: return "READY";
    case ProcState::Running: return "RUNNING";
    case ProcState::Waiting: return "WAITING";
  }
  return "UNKNOWN";
}

const char* to_string(PartitionMode m) {
  switch (m) {
    case PartitionMode::ColdStart: return "COLD_START";
    case PartitionMode::Normal: return "NORMAL";
    case PartitionMode::Idle: return "IDLE";
  }
  return "UNKNOWN";
}

enum class Kernel::SuspendReason : std::uint8_t {
  None,
  Yield,
  Blocked,
  Exited,
  Boundary,
  Preempted,
  HmPending,
};

enum class Kernel::WaitKind : std::uint8_t {
  None,
  Semaphore,
  Event,
  Mutex,
  BlackboardRead,
  BufferSend,
  BufferReceive,
  QueuingSend,
  QueuingReceive,
  Period,
};

struct Kernel::TimerEntry {
  std::uint64_t tick = 0;
  std::uint64_t seq = 0;
  ProcessId pid = -1;
  bool is_release = false;
};

bool Kernel::timer_after(const TimerEntry& a, const TimerEntry& b) {
  // std::push_heap builds a max-heap; invert so the earliest entry pops first.
  if (a.tick != b.tick) return a.tick > b.tick;
  return a.seq > b.seq;
}

struct Kernel::Pcb {
  ProcessId id = -1;
  PartitionId partition = -1;
  ProcessAttributes attrs;
  int priority = 0;
  ProcState state = ProcState::Dormant;
  bool dead = false;
  bool started = false;
  std::uint64_t ready_seq = 0;
  std::uint64_t ready_tick = 0;
  SuspendReason suspend = SuspendReason::None;

  WaitKind wait_kind = WaitKind::None;
  ObjectId wait_obj = -1;
  std::vector<ProcessId>* wait_queue = nullptr;
  StatusCode wake_status = StatusCode::Ok;
  bool timer_armed = false;
  std::uint64_t timer_gen = 0;
  std::vector<std::uint8_t> xfer;         // message delivered by the waker
  std::vector<std::uint8_t> pending_msg;  // message a blocked sender carries

  // periodic bookkeeping
  std::uint64_t next_release = 0;
  std::uint32_t pending_releases = 0;
  std::uint64_t release_index = 0;
  bool in_periodic_wait = false;

  ucontext_t ctx{};
  std::unique_ptr<char[]> stack;
  bool ctx_valid = false;
};

struct Kernel::Partition {
  PartitionId id = -1;
  PartitionConfig cfg;
  PartitionMode mode = PartitionMode::ColdStart;
  std::function<void()> entry;
  bool init_pending = false;  // entry not yet started
  bool init_active = false;   // entry started, suspended at a boundary
  std::uint64_t init_earliest = 0;
  ucontext_t init_ctx{};
  std::unique_ptr<char[]> init_stack;
  std::uint64_t mem_used = 0;
  int lock_level = 0;
  std::vector<ProcessId> procs;
  std::map<std::string, ProcessId, std::less<>> proc_names;
  std::map<std::string, ObjectId, std::less<>> sem_names, event_names, mutex_names,
      bb_names, buf_names;
  std::vector<TimerEntry> timers;  // heap ordered by (tick, seq)
};

struct Kernel::Semaphore {
  ObjectId id = -1;
  PartitionId partition = -1;
  std::string name;
  std::uint32_t value = 0;
  std::uint32_t max_value = 0;
  std::vector<ProcessId> waiters;
  bool dead = false;
};

struct Kernel::EventObj {
  ObjectId id = -1;
  PartitionId partition = -1;
  std::string name;
  bool up = false;
  std::vector<ProcessId> waiters;
  bool dead = false;
};

struct Kernel::Mutex {
  ObjectId id = -1;
  PartitionId partition = -1;
  std::string name;
  ProcessId owner = -1;
  std::vector<ProcessId> waiters;
  bool dead = false;
};

struct Kernel::Blackboard {
  ObjectId id = -1;
  PartitionId partition = -1;
  std::string name;
  std::uint32_t max_size = 0;
  std::optional<std::vector<std::uint8_t>> slot;
  std::vector<ProcessId> waiters;
  bool dead = false;
};

struct Kernel::BufferQueue {
  ObjectId id = -1;
  PartitionId partition = -1;
  std::string name;
  std::uint32_t capacity = 0;
  std::uint32_t max_size = 0;
  std::deque<std::vector<std::uint8_t>> q;
  std::vector<ProcessId> send_waiters, receive_waiters;
  bool dead = false;
};

struct Kernel::SamplingPort {
  ObjectId id = -1;
  PartitionId partition = -1;
  std::string name;
  PortDirection dir = PortDirection::Source;
  std::uint32_t max_size = 0;
  std::uint64_t refresh = 0;
  std::optional<std::vector<std::uint8_t>> slot;
  std::uint64_t write_tick = 0;
  bool dead = false;
};

struct Kernel::QueuingPort {
  ObjectId id = -1;
  PartitionId partition = -1;
  std::string name;
  PortDirection dir = PortDirection::Source;
  std::uint32_t capacity = 0;
  std::uint32_t max_size = 0;
  std::deque<std::vector<std::uint8_t>> q;
  std::vector<ProcessId> send_waiters, receive_waiters;
  bool dead = false;
};

// ---------------------------------------------------------------- lifecycle

Kernel::Kernel(SystemConfig config) : cfg_(std::move(config)) {
  std::string err;
  if (cfg_.validate(&err) != StatusCode::Ok || cfg_.partitions.empty()) {
    booted_ = false;
    return;
  }
  clock_ = Clock(cfg_.clock, cfg_.tick_rate);
  clock_.reset();
  partitions_.reserve(cfg_.partitions.size());
  for (std::size_t i = 0; i < cfg_.partitions.size(); ++i) {
    auto p = std::make_unique<Partition>();
    p->id = static_cast<PartitionId>(i);
    p->cfg = cfg_.partitions[i];
    partitions_.push_back(std::move(p));
  }
  window_index_ = 0;
  frame_ = 0;
  window_start_ = cfg_.windows[0].offset;
  window_end_ = window_start_ + cfg_.windows[0].duration;
  window_owner_ = cfg_.windows[0].partition;
  booted_ = true;
}

Kernel::~Kernel() = default;

void Kernel::set_partition_entry(PartitionId partition, std::function<void()> entry) {
  if (partition < 0 || static_cast<std::size_t>(partition) >= partitions_.size()) return;
  partitions_[partition]->entry = std::move(entry);
  partitions_[partition]->init_pending = true;
}

// ------------------------------------------------------------------- trace

void Kernel::emit(TraceKind kind, PartitionId partition, ProcessId process,
                  std::uint64_t a, std::uint64_t b, std::string label) {
  if (!trace_enabled_) return;
  trace_.push_back({clock_.now_ticks(), kind, partition, process, a, b, std::move(label)});
}

std::string Kernel::render_trace() const {
  std::vector<std::string> parts, procs;
  for (const auto& p : partitions_) parts.push_back(p->cfg.name);
  for (const auto& p : pcbs_) procs.push_back(p->attrs.name);
  return format_trace(trace_, parts, procs);
}

// ------------------------------------------------------------ context glue

PartitionId Kernel::current_partition() const {
  if (current_ >= 0) return pcbs_[current_]->partition;
  return init_partition_;
}

void Kernel::trampoline_process() {
  Kernel* k = g_active;
  Pcb& p = *k->pcbs_[k->current_];
  p.attrs.entry();
  k->on_process_exit();
}

void Kernel::trampoline_partition() {
  Kernel* k = g_active;
  Partition& par = *k->partitions_[k->init_partition_];
  if (par.entry) par.entry();
  par.init_active = false;
  par.mode = PartitionMode::Normal;
  k->emit(TraceKind::ModeChange, par.id, -1,
          static_cast<std::uint64_t>(PartitionMode::Normal));
  // Falls off the end; uc_link returns control to the scheduler.
}

void Kernel::on_process_exit() {
  Pcb& p = *pcbs_[current_];
  emit(TraceKind::ProcessEnd, p.partition, p.id);
  p.state = ProcState::Dormant;
  p.started = false;
  cancel_timer(p);
  suspend_current(SuspendReason::Exited);
}

void Kernel::suspend_current(SuspendReason reason) {
  if (current_ >= 0) {
    Pcb& p = *pcbs_[current_];
    p.suspend = reason;
    swapcontext(&p.ctx, &main_ctx_);
    return;
  }
  if (init_partition_ >= 0) {
    Partition& par = *partitions_[init_partition_];
    swapcontext(&par.init_ctx, &main_ctx_);
    return;
  }
}

// ---------------------------------------------------------------- charging

void Kernel::charge(std::uint64_t ticks) {
  if (!running_) return;  // setup outside run() is free
  if (clock_.mode() == ClockMode::Host) {
    poll_host_boundary();
    return;
  }
  while (ticks > 0) {
    std::uint64_t now = clock_.now_ticks();
    if (now >= window_end_) {
      if (in_process_context() || init_partition_ >= 0)
        suspend_current(SuspendReason::Boundary);
      else
        advance_window();
      continue;
    }
    std::uint64_t room = window_end_ - now;
    if (ticks < room) {
      clock_.advance(ticks);
      return;
    }
    clock_.advance(room);
    ticks -= room;
    if (in_process_context() || init_partition_ >= 0)
      suspend_current(SuspendReason::Boundary);
    else
      advance_window();
  }
}

void Kernel::charge_call(const char* op) { charge(cfg_.costs.cost_of(op)); }

void Kernel::poll_host_boundary() {
  if (clock_.mode() != ClockMode::Host || !running_) return;
  while (clock_.now_ticks() >= window_end_) {
    if (in_process_context() || init_partition_ >= 0)
      suspend_current(SuspendReason::Boundary);
    else
      advance_window();
  }
}

// -------------------------------------------------------------- scheduling

void Kernel::make_ready(Pcb& p, bool fresh_seq) {
  p.state = ProcState::Ready;
  if (fresh_seq) p.ready_seq = ++ready_seq_;
  p.ready_tick = clock_.now_ticks();
}

ProcessId Kernel::pick_ready(PartitionId partition) const {
  if (partition < 0) return -1;
  const Partition& par = *partitions_[partition];
  if (par.mode != PartitionMode::Normal) return -1;
  ProcessId best = -1;
  for (ProcessId pid : par.procs) {
    const Pcb& p = *pcbs_[pid];
    if (p.dead || p.state != ProcState::Ready) continue;
    if (best < 0) {
      best = pid;
      continue;
    }
    const Pcb& b = *pcbs_[best];
    if (p.priority > b.priority ||
        (p.priority == b.priority && p.ready_seq < b.ready_seq))
      best = pid;
  }
  return best;
}

std::uint64_t Kernel::next_timer_tick_for(PartitionId pid) const {
  if (pid < 0) return kInfiniteTime;
  auto& timers = partitions_[pid]->timers;
  while (!timers.empty()) {
    const TimerEntry& top = timers.front();
    const Pcb& p = *pcbs_[top.pid];
    bool stale = p.dead ||
                 (top.is_release
                      ? (!p.started || !p.attrs.period_ticks)
                      : (!p.timer_armed || p.timer_gen != top.seq ||
                         p.state != ProcState::Waiting));
    if (!stale) return top.tick;
    std::pop_heap(timers.begin(), timers.end(), &Kernel::timer_after);
    timers.pop_back();
  }
  return kInfiniteTime;
}

void Kernel::process_due_timers_for(PartitionId pid) {
  if (pid < 0) return;
  Partition& par = *partitions_[pid];
  while (true) {
    std::uint64_t next = next_timer_tick_for(pid);
    if (next > clock_.now_ticks()) return;
    std::pop_heap(par.timers.begin(), par.timers.end(), &Kernel::timer_after);
    TimerEntry e = par.timers.back();
    par.timers.pop_back();
    Pcb& p = *pcbs_[e.pid];
    if (e.is_release) {
      p.release_index++;
      emit(TraceKind::Release, p.partition, p.id, p.release_index);
      if (p.in_periodic_wait) {
        p.in_periodic_wait = false;
        wake_process(p.id, StatusCode::Ok, false);
      } else {
        // Previous activation still in flight at its release point.
        p.pending_releases++;
        emit(TraceKind::DeadlineMiss, p.partition, p.id, p.release_index);
        emit(TraceKind::ErrorRaised, p.partition, p.id,
             static_cast<std::uint64_t>(ErrorCode::DeadlineMiss));
        HealthAction act = cfg_.hm.action_for(ErrorCode::DeadlineMiss);
        apply_health_action(ErrorCode::DeadlineMiss, act, p.id, p.partition);
        if (act != HealthAction::Ignore) continue;  // the action re-arms or clears
      }
      p.next_release += *p.attrs.period_ticks;
      par.timers.push_back({p.next_release, ++timer_seq_, p.id, true});
      std::push_heap(par.timers.begin(), par.timers.end(), &Kernel::timer_after);
    } else {
      emit(TraceKind::Timeout, p.partition, p.id, e.tick);
      p.timer_armed = false;
      wake_process(p.id, StatusCode::TimedOut, true);
    }
  }
}

bool Kernel::advance_window() {
  // Precondition: the clock sits at or past window_end_.
  PartitionId outgoing = window_owner_;
  std::uint64_t boundary = window_end_;

  window_index_ = (window_index_ + 1) % cfg_.windows.size();
  if (window_index_ == 0) frame_++;
  const ScheduleWindow& w = cfg_.windows[window_index_];
  window_start_ = frame_ * cfg_.major_frame_ticks + w.offset;
  window_end_ = window_start_ + w.duration;
  window_owner_ = w.partition;
  last_dispatched_ = -1;

  if (window_start_ > boundary) {
    if (clock_.mode() == ClockMode::Virtual) {
      emit(TraceKind::Idle, -1, -1, window_start_ - boundary);
      clock_.advance_to(window_start_);
    } else {
      while (clock_.now_ticks() < window_start_) { /* host clock catches up */ }
    }
  }

  emit(TraceKind::WindowStart, window_owner_, -1, window_index_, frame_);

  if (window_owner_ != outgoing) {
    prev_window_owner_ = outgoing;
    prev_last_exec_ = last_exec_tick_;
    gap_pending_ = outgoing >= 0;
    // The switch overhead consumes the head of the incoming window, capped
    // at the window's end: a window smaller than the overhead is simply
    // lost. Paying it here directly (not through charge) keeps boundary
    // handling iterative no matter how the costs relate to the durations.
    if (clock_.mode() == ClockMode::Virtual) {
      const std::uint64_t now = clock_.now_ticks();
      const std::uint64_t room = window_end_ > now ? window_end_ - now : 0;
      clock_.advance(std::min(cfg_.costs.partition_switch, room));
    }
  }
  process_due_timers_for(window_owner_);
  return true;
}

void Kernel::switch_to_process(ProcessId pid) {
  if (last_dispatched_ >= 0 && last_dispatched_ != pid) {
    emit(TraceKind::ProcessSwitch, window_owner_, pid,
         static_cast<std::uint64_t>(last_dispatched_));
    std::uint64_t fr = frame_;
    std::size_t wi = window_index_;
    charge(cfg_.costs.process_switch);
    if (fr != frame_ || wi != window_index_) return;  // charge crossed the window
  }
  Pcb& p = *pcbs_[pid];
  if (p.state != ProcState::Ready) return;

  if (gap_pending_) {
    std::uint64_t gap = clock_.now_ticks() - prev_last_exec_;
    gaps_.push_back(gap);
    emit(TraceKind::PartitionSwitch, window_owner_, pid, gap,
         static_cast<std::uint64_t>(prev_window_owner_));
    gap_pending_ = false;
  }

  emit(TraceKind::Dispatch, p.partition, p.id,
       static_cast<std::uint64_t>(p.priority), p.ready_seq);
  p.state = ProcState::Running;
  p.suspend = SuspendReason::None;
  current_ = pid;
  last_dispatched_ = pid;
  swapcontext(&main_ctx_, &p.ctx);
  current_ = -1;
  last_exec_tick_ = clock_.now_ticks();

  switch (p.suspend) {
    case SuspendReason::Yield:
      make_ready(p, true);
      break;
    case SuspendReason::Boundary:
    case SuspendReason::Preempted:
      make_ready(p, false);
      break;
    case SuspendReason::Blocked:
    case SuspendReason::Exited:
      break;  // state already recorded
    case SuspendReason::HmPending: {
      PendingHm hm = pending_hm_;
      pending_hm_ = PendingHm{};
      apply_health_action(hm.code, hm.action, hm.source, hm.partition);
      break;
    }
    case SuspendReason::None:
      break;
  }
}

void Kernel::run_partition_init(PartitionId pid) {
  Partition& par = *partitions_[pid];
  if (par.init_pending) {
    par.init_stack = std::make_unique<char[]>(kStackBytes);
    getcontext(&par.init_ctx);
    par.init_ctx.uc_stack.ss_sp = par.init_stack.get();
    par.init_ctx.uc_stack.ss_size = kStackBytes;
    par.init_ctx.uc_link = &main_ctx_;
    makecontext(&par.init_ctx, &Kernel::trampoline_partition, 0);
    par.init_pending = false;
    par.init_active = true;
    emit(TraceKind::ModeChange, pid, -1,
         static_cast<std::uint64_t>(PartitionMode::ColdStart));
  }
  init_partition_ = pid;
  swapcontext(&main_ctx_, &par.init_ctx);
  init_partition_ = -1;
  last_exec_tick_ = clock_.now_ticks();
}

bool Kernel::dispatch_once() {
  if (clock_.now_ticks() >= window_end_) {
    advance_window();
    return true;
  }
  process_due_timers_for(window_owner_);

  Partition* par = window_owner_ >= 0 ? partitions_[window_owner_].get() : nullptr;

  if (par && par->mode == PartitionMode::ColdStart &&
      (par->init_pending || par->init_active)) {
    if (clock_.now_ticks() >= par->init_earliest) {
      run_partition_init(par->id);
      return true;
    }
  } else if (par && par->mode == PartitionMode::ColdStart) {
    // No entry registered: the partition comes up empty but operational.
    par->mode = PartitionMode::Normal;
    emit(TraceKind::ModeChange, par->id, -1,
         static_cast<std::uint64_t>(PartitionMode::Normal));
    return true;
  }

  ProcessId pid = pick_ready(window_owner_);
  if (pid >= 0) {
    switch_to_process(pid);
    return true;
  }

  // Nothing runnable: jump (virtual) or wait (host) for the next event.
  std::uint64_t target = window_end_;
  std::uint64_t timer = next_timer_tick_for(window_owner_);
  if (timer < target) target = timer;
  if (par && par->mode == PartitionMode::ColdStart &&
      (par->init_pending || par->init_active) &&
      par->init_earliest > clock_.now_ticks() && par->init_earliest < target)
    target = par->init_earliest;
  if (clock_.mode() == ClockMode::Virtual) {
    std::uint64_t now = clock_.now_ticks();
    if (target > now) {
      emit(TraceKind::Idle, window_owner_, -1, target - now);
      clock_.advance_to(target);
    }
  } else {
    while (clock_.now_ticks() < target) { /* host clock catches up */ }
  }
  if (clock_.now_ticks() >= window_end_)
    advance_window();
  else
    process_due_timers_for(window_owner_);
  return true;
}

bool Kernel::quiescent() const {
  for (const auto& par : partitions_) {
    if (par->mode == PartitionMode::ColdStart && par->entry &&
        (par->init_pending || par->init_active))
      return false;
    if (next_timer_tick_for(par->id) != kInfiniteTime) return false;
  }
  for (const auto& p : pcbs_) {
    if (p->dead) continue;
    if (p->state == ProcState::Ready || p->state == ProcState::Running) return false;
  }
  return true;
}

StatusCode Kernel::run(RunBounds bounds) {
  if (!booted_) return StatusCode::ConfigInvalid;
  if (running_) return StatusCode::InvalidState;

  std::uint64_t tick_target = kInfiniteTime;
  if (bounds.kind == RunBounds::Kind::Frames)
    tick_target = bounds.n * cfg_.major_frame_ticks;
  else if (bounds.kind == RunBounds::Kind::Ticks)
    tick_target = bounds.n;

  Kernel* prev_active = g_active;
  g_active = this;
  running_ = true;
  if (!first_run_done_) {
    first_run_done_ = true;
    emit(TraceKind::Boot, -1, -1);
    if (clock_.mode() == ClockMode::Virtual)
      clock_.advance_to(window_start_);
    else
      while (clock_.now_ticks() < window_start_) { /* host clock catches up */ }
    emit(TraceKind::WindowStart, window_owner_, -1, window_index_, frame_);
    process_due_timers_for(window_owner_);
  }

  StatusCode result = StatusCode::Ok;
  while (true) {
    if (++steps_ > kStepCap) {
      result = StatusCode::ResourceExhausted;
      break;
    }
    if (clock_.now_ticks() >= tick_target) break;
    if (quiescent()) {
      if (bounds.kind == RunBounds::Kind::Quiescent) break;
      if (clock_.mode() == ClockMode::Virtual) {
        // Nothing will ever run again; walk the windows up to the bound.
        clock_.advance_to(std::min(tick_target, window_end_));
        if (clock_.now_ticks() >= window_end_ && clock_.now_ticks() < tick_target)
          advance_window();
        continue;
      }
    }
    dispatch_once();
  }

  running_ = false;
  g_active = prev_active;
  return result;
}

// ------------------------------------------------------- waiting and waking

void Kernel::arm_timeout(Pcb& p, std::uint64_t expire) {
  p.timer_armed = true;
  p.timer_gen = ++timer_seq_;
  Partition& par = *partitions_[p.partition];
  par.timers.push_back({expire, p.timer_gen, p.id, false});
  std::push_heap(par.timers.begin(), par.timers.end(), &Kernel::timer_after);
}

void Kernel::cancel_timer(Pcb& p) { p.timer_armed = false; }

StatusCode Kernel::block_current(WaitKind kind, ObjectId obj, std::uint64_t timeout,
                                 std::vector<ProcessId>* queue) {
  Pcb& p = *pcbs_[current_];
  p.wait_kind = kind;
  p.wait_obj = obj;
  p.wait_queue = queue;
  p.wake_status = StatusCode::Ok;
  if (queue) queue->push_back(p.id);
  if (timeout != kInfiniteTime) arm_timeout(p, clock_.now_ticks() + timeout);
  p.state = ProcState::Waiting;
  emit(TraceKind::Block, p.partition, p.id, static_cast<std::uint64_t>(obj));
  suspend_current(SuspendReason::Blocked);
  cancel_timer(p);
  p.wait_kind = WaitKind::None;
  p.wait_obj = -1;
  p.wait_queue = nullptr;
  return p.wake_status;
}

void Kernel::wake_process(ProcessId id, StatusCode wake_status, bool from_timeout) {
  Pcb& p = *pcbs_[id];
  if (p.dead || p.state != ProcState::Waiting) return;
  if (from_timeout && p.wait_queue) {
    auto& q = *p.wait_queue;
    q.erase(std::remove(q.begin(), q.end(), id), q.end());
  }
  p.timer_armed = false;
  p.wake_status = wake_status;
  make_ready(p, true);
  emit(TraceKind::Wake, p.partition, p.id, from_timeout ? 1 : 0);
}

void Kernel::preempt_point() {
  if (current_ < 0) return;
  Pcb& cur = *pcbs_[current_];
  Partition& par = *partitions_[cur.partition];
  if (par.lock_level > 0) return;
  ProcessId best = pick_ready(cur.partition);
  if (best >= 0 && pcbs_[best]->priority > cur.priority) {
    emit(TraceKind::Preempt, cur.partition, cur.id, static_cast<std::uint64_t>(best));
    suspend_current(SuspendReason::Preempted);
  }
}

void Kernel::release_waiters_of(std::vector<ProcessId>& waiters, StatusCode status) {
  std::vector<ProcessId> copy = waiters;
  waiters.clear();
  for (ProcessId pid : copy) wake_process(pid, status, false);
}

// ----------------------------------------------------------- health monitor

void Kernel::apply_health_action(ErrorCode code, HealthAction action, ProcessId source,
                                 PartitionId partition) {
  emit(TraceKind::HmAction, partition, source, static_cast<std::uint64_t>(action),
       static_cast<std::uint64_t>(code));
  switch (action) {
    case HealthAction::Ignore:
      return;
    case HealthAction::RestartProcess: {
      if (source < 0) return;
      Pcb& p = *pcbs_[source];
      if (p.dead) return;
      detach_from_wait(p);
      build_context(p);
      p.state = ProcState::Dormant;
      p.started = false;
      start_pcb(p);
      return;
    }
    case HealthAction::RestartPartition:
      if (partition >= 0) restart_partition_state(partition);
      return;
    case HealthAction::StopPartition:
      if (partition >= 0) stop_partition_state(partition);
      return;
  }
}

void Kernel::detach_from_wait(Pcb& p) {
  if (p.wait_queue) {
    auto& q = *p.wait_queue;
    q.erase(std::remove(q.begin(), q.end(), p.id), q.end());
    p.wait_queue = nullptr;
  }
  p.wait_kind = WaitKind::None;
  p.timer_armed = false;
  p.in_periodic_wait = false;
  p.pending_releases = 0;
}

void Kernel::destroy_partition_objects(PartitionId pid) {
  Partition& par = *partitions_[pid];
  for (auto& s : semaphores_)
    if (s && !s->dead && s->partition == pid) {
      release_waiters_of(s->waiters, StatusCode::InvalidState);
      s->dead = true;
    }
  par.sem_names.clear();
  for (auto& e : events_)
    if (e && !e->dead && e->partition == pid) {
      release_waiters_of(e->waiters, StatusCode::InvalidState);
      e->dead = true;
    }
  par.event_names.clear();
  for (auto& m : mutexes_)
    if (m && !m->dead && m->partition == pid) {
      release_waiters_of(m->waiters, StatusCode::InvalidState);
      m->dead = true;
    }
  par.mutex_names.clear();
  for (auto& b : blackboards_)
    if (b && !b->dead && b->partition == pid) {
      release_waiters_of(b->waiters, StatusCode::InvalidState);
      b->dead = true;
    }
  par.bb_names.clear();
  for (auto& b : buffers_)
    if (b && !b->dead && b->partition == pid) {
      release_waiters_of(b->send_waiters, StatusCode::InvalidState);
      release_waiters_of(b->receive_waiters, StatusCode::InvalidState);
      b->dead = true;
    }
  par.buf_names.clear();
  for (auto& sp : sampling_ports_)
    if (sp && !sp->dead && sp->partition == pid) {
      port_names_.erase(sp->name);
      sp->dead = true;
    }
  for (auto& qp : queuing_ports_)
    if (qp && !qp->dead && qp->partition == pid) {
      release_waiters_of(qp->send_waiters, StatusCode::InvalidState);
      release_waiters_of(qp->receive_waiters, StatusCode::InvalidState);
      port_names_.erase(qp->name);
      qp->dead = true;
    }
}

void Kernel::restart_partition_state(PartitionId pid) {
  Partition& par = *partitions_[pid];
  destroy_partition_objects(pid);
  for (ProcessId proc : par.procs) {
    Pcb& p = *pcbs_[proc];
    detach_from_wait(p);
    p.dead = true;
    p.state = ProcState::Dormant;
    p.stack.reset();
    p.ctx_valid = false;
  }
  par.procs.clear();
  par.proc_names.clear();
  par.timers.clear();
  par.mem_used = 0;
  par.lock_level = 0;
  par.mode = PartitionMode::ColdStart;
  par.init_pending = par.entry != nullptr;
  par.init_active = false;
  par.init_stack.reset();
  // The entry re-runs in this partition's next window, never the current one.
  par.init_earliest = window_owner_ == pid ? window_end_ : 0;
  emit(TraceKind::ModeChange, pid, -1,
       static_cast<std::uint64_t>(PartitionMode::ColdStart));
}

void Kernel::stop_partition_state(PartitionId pid) {
  Partition& par = *partitions_[pid];
  for (ProcessId proc : par.procs) {
    Pcb& p = *pcbs_[proc];
    detach_from_wait(p);
    p.state = ProcState::Dormant;
    p.started = false;
  }
  par.timers.clear();
  par.mode = PartitionMode::Idle;
  par.init_pending = false;
  par.init_active = false;
  emit(TraceKind::ModeChange, pid, -1, static_cast<std::uint64_t>(PartitionMode::Idle));
}

Result<HealthAction> Kernel::raise_error(ErrorCode code) {
  charge_call("RAISE_ERROR");
  using R = Result<HealthAction>;
  HealthAction action = cfg_.hm.action_for(code);
  ProcessId source = current_;
  PartitionId partition = current_partition();
  emit(TraceKind::ErrorRaised, partition, source, static_cast<std::uint64_t>(code));
  bool tears_down_self =
      (source >= 0 && action == HealthAction::RestartProcess) ||
      (partition >= 0 && (action == HealthAction::RestartPartition ||
                          action == HealthAction::StopPartition));
  if (!tears_down_self || (source < 0 && init_partition_ < 0)) {
    apply_health_action(code, action, source, partition);
    return R::success(action);
  }
  // The action tears down the calling context; let the scheduler apply it
  // once we are off this stack. The call never returns for the torn-down
  // context itself.
  pending_hm_ = {code, action, source, partition};
  suspend_current(SuspendReason::HmPending);
  return R::success(action);
}

// ------------------------------------------------------------ process mgmt

StatusCode Kernel::charge_quota(PartitionId pid, std::uint64_t bytes) {
  Partition& par = *partitions_[pid];
  if (par.mem_used + bytes > par.cfg.memory_quota) return StatusCode::ResourceExhausted;
  par.mem_used += bytes;
  return StatusCode::Ok;
}

void Kernel::refund_quota(PartitionId pid, std::uint64_t bytes) {
  Partition& par = *partitions_[pid];
  par.mem_used = par.mem_used >= bytes ? par.mem_used - bytes : 0;
}

void Kernel::build_context(Pcb& p) {
  p.stack = std::make_unique<char[]>(kStackBytes);
  getcontext(&p.ctx);
  p.ctx.uc_stack.ss_sp = p.stack.get();
  p.ctx.uc_stack.ss_size = kStackBytes;
  p.ctx.uc_link = &main_ctx_;
  makecontext(&p.ctx, &Kernel::trampoline_process, 0);
  p.ctx_valid = true;
}

void Kernel::start_pcb(Pcb& p) {
  p.started = true;
  make_ready(p, true);
  emit(TraceKind::ProcessStart, p.partition, p.id);
  if (p.attrs.period_ticks) {
    p.next_release = clock_.now_ticks() + *p.attrs.period_ticks;
    p.pending_releases = 0;
    p.in_periodic_wait = false;
    Partition& par = *partitions_[p.partition];
    par.timers.push_back({p.next_release, ++timer_seq_, p.id, true});
    std::push_heap(par.timers.begin(), par.timers.end(), &Kernel::timer_after);
  }
}

Result<ProcessId> Kernel::create_process(PartitionId partition, ProcessAttributes attrs) {
  using R = Result<ProcessId>;
  charge_call("CREATE_PROCESS");
  if (partition < 0 || static_cast<std::size_t>(partition) >= partitions_.size())
    return R::failure(StatusCode::UnknownId);
  PartitionId ctx_partition = current_partition();
  if (ctx_partition >= 0 && ctx_partition != partition)
    return R::failure(StatusCode::InvalidState);
  Partition& par = *partitions_[partition];
  if (par.mode == PartitionMode::Idle) return R::failure(StatusCode::InvalidState);
  if (par.mode == PartitionMode::Normal && !cfg_.runtime_process_creation)
    return R::failure(StatusCode::InvalidState);
  if (attrs.name.empty() || !attrs.entry || attrs.priority < 0 || attrs.priority > 255)
    return R::failure(StatusCode::ConfigInvalid);
  if (attrs.period_ticks && *attrs.period_ticks == 0)
    return R::failure(StatusCode::ConfigInvalid);
  if (par.proc_names.count(attrs.name)) return R::failure(StatusCode::DuplicateName);
  if (par.procs.size() >= cfg_.max_processes_per_partition)
    return R::failure(StatusCode::ResourceExhausted);
  if (charge_quota(partition, attrs.stack_budget) != StatusCode::Ok)
    return R::failure(StatusCode::ResourceExhausted);
  if (attrs.period_ticks && !attrs.deadline_ticks) attrs.deadline_ticks = attrs.period_ticks;

  auto pcb = std::make_unique<Pcb>();
  pcb->id = static_cast<ProcessId>(pcbs_.size());
  pcb->partition = partition;
  pcb->priority = attrs.priority;
  pcb->attrs = std::move(attrs);
  ProcessId id = pcb->id;
  par.procs.push_back(id);
  par.proc_names[pcb->attrs.name] = id;
  pcbs_.push_back(std::move(pcb));
  emit(TraceKind::ProcessCreate, partition, id);
  return R::success(id);
}

StatusCode Kernel::start_process(ProcessId id) {
  charge_call("START_PROCESS");
  if (id < 0 || static_cast<std::size_t>(id) >= pcbs_.size()) return StatusCode::UnknownId;
  Pcb& p = *pcbs_[id];
  if (p.dead) return StatusCode::UnknownId;
  PartitionId ctx_partition = current_partition();
  if (ctx_partition >= 0 && ctx_partition != p.partition) return StatusCode::UnknownId;
  if (p.state != ProcState::Dormant || p.started) return StatusCode::InvalidState;
  build_context(p);
  start_pcb(p);
  preempt_point();
  return StatusCode::Ok;
}

StatusCode Kernel::set_priority(ProcessId id, int new_priority) {
  charge_call("SET_PRIORITY");
  if (id < 0 || static_cast<std::size_t>(id) >= pcbs_.size()) return StatusCode::UnknownId;
  Pcb& p = *pcbs_[id];
  if (p.dead) return StatusCode::UnknownId;
  PartitionId ctx_partition = current_partition();
  if (ctx_partition >= 0 && ctx_partition != p.partition) return StatusCode::UnknownId;
  if (new_priority < 0 || new_priority > 255) return StatusCode::ConfigInvalid;
  p.priority = new_priority;
  preempt_point();
  return StatusCode::Ok;
}

Result<ProcessId> Kernel::get_my_id() const {
  const_cast<Kernel*>(this)->charge_call("GET_MY_ID");
  using R = Result<ProcessId>;
  if (current_ < 0) return R::failure(StatusCode::InvalidState);
  return R::success(current_);
}

Result<ProcessId> Kernel::get_process_id(std::string_view name) const {
  const_cast<Kernel*>(this)->charge_call("GET_PROCESS_ID");
  using R = Result<ProcessId>;
  PartitionId pid = current_partition();
  if (pid < 0) {
    for (const auto& par : partitions_) {
      auto it = par->proc_names.find(name);
      if (it != par->proc_names.end()) return R::success(it->second);
    }
    return R::failure(StatusCode::UnknownName);
  }
  const Partition& par = *partitions_[pid];
  auto it = par.proc_names.find(name);
  if (it == par.proc_names.end()) return R::failure(StatusCode::UnknownName);
  return R::success(it->second);
}

Result<ProcessStatusRec> Kernel::get_process_status(ProcessId id) const {
  const_cast<Kernel*>(this)->charge_call("GET_PROCESS_STATUS");
  using R = Result<ProcessStatusRec>;
  if (id < 0 || static_cast<std::size_t>(id) >= pcbs_.size())
    return R::failure(StatusCode::UnknownId);
  const Pcb& p = *pcbs_[id];
  if (p.dead) return R::failure(StatusCode::UnknownId);
  PartitionId ctx_partition = current_partition();
  if (ctx_partition >= 0 && ctx_partition != p.partition)
    return R::failure(StatusCode::UnknownId);
  ProcessStatusRec rec;
  rec.state = p.state;
  rec.priority = p.priority;
  rec.period_ticks = p.attrs.period_ticks;
  rec.ready_since = p.ready_tick;
  return R::success(rec);
}

Result<PartitionStatusRec> Kernel::get_partition_status() const {
  const_cast<Kernel*>(this)->charge_call("GET_PARTITION_STATUS");
  using R = Result<PartitionStatusRec>;
  PartitionId pid = current_partition();
  if (pid < 0) return R::failure(StatusCode::InvalidState);
  PartitionStatusRec rec;
  rec.id = pid;
  rec.mode = partitions_[pid]->mode;
  std::uint64_t now = clock_.now_ticks();
  rec.window_remaining_ticks =
      (window_owner_ == pid && window_end_ > now) ? window_end_ - now : 0;
  return R::success(rec);
}

Result<std::uint64_t> Kernel::get_current_ticks() {
  charge_call("GET_CURRENT_TICKS");
  return Result<std::uint64_t>::success(clock_.now_ticks());
}

StatusCode Kernel::lock_preemption() {
  charge_call("LOCK_PREEMPTION");
  PartitionId pid = current_partition();
  if (pid < 0) return StatusCode::InvalidState;
  Partition& par = *partitions_[pid];
  if (par.mode != PartitionMode::Normal) return StatusCode::InvalidState;
  par.lock_level++;
  return StatusCode::Ok;
}

StatusCode Kernel::unlock_preemption() {
  charge_call("UNLOCK_PREEMPTION");
  PartitionId pid = current_partition();
  if (pid < 0) return StatusCode::InvalidState;
  Partition& par = *partitions_[pid];
  if (par.mode != PartitionMode::Normal) return StatusCode::InvalidState;
  if (par.lock_level == 0) return StatusCode::Underflow;
  par.lock_level--;
  if (par.lock_level == 0) preempt_point();
  return StatusCode::Ok;
}

StatusCode Kernel::periodic_wait() {
  charge_call("PERIODIC_WAIT");
  if (current_ < 0) return StatusCode::InvalidState;
  Pcb& p = *pcbs_[current_];
  if (!p.attrs.period_ticks) return StatusCode::InvalidState;
  if (p.pending_releases > 0) {
    p.pending_releases--;
    return StatusCode::Ok;
  }
  p.in_periodic_wait = true;
  return block_current(WaitKind::Period, -1, kInfiniteTime, nullptr);
}

StatusCode Kernel::yield() {
  if (current_ < 0) return StatusCode::InvalidState;
  // Free by design: the benches alternate on it and it must not skew samples.
  suspend_current(SuspendReason::Yield);
  return StatusCode::Ok;
}

// ---------------------------------------------------------------- IPC glue

template <typename T>
T* Kernel::find_object(std::vector<std::unique_ptr<T>>& table, ObjectId id) {
  if (id < 0 || static_cast<std::size_t>(id) >= table.size()) return nullptr;
  T* obj = table[id].get();
  if (!obj || obj->dead) return nullptr;
  PartitionId ctx_partition = current_partition();
  if (ctx_partition >= 0 && obj->partition != ctx_partition) return nullptr;
  return obj;
}

// Ports live in a global namespace and are reachable across partitions.
template <>
Kernel::SamplingPort* Kernel::find_object(std::vector<std::unique_ptr<SamplingPort>>& table,
                                          ObjectId id) {
  if (id < 0 || static_cast<std::size_t>(id) >= table.size()) return nullptr;
  SamplingPort* obj = table[id].get();
  return (!obj || obj->dead) ? nullptr : obj;
}

template <>
Kernel::QueuingPort* Kernel::find_object(std::vector<std::unique_ptr<QueuingPort>>& table,
                                         ObjectId id) {
  if (id < 0 || static_cast<std::size_t>(id) >= table.size()) return nullptr;
  QueuingPort* obj = table[id].get();
  return (!obj || obj->dead) ? nullptr : obj;
}

// -------------------------------------------------------------- semaphores

Result<ObjectId> Kernel::create_semaphore(std::string_view name, std::uint32_t initial,
                                          std::uint32_t max_value) {
  charge_call("CREATE_SEMAPHORE");
  using R = Result<ObjectId>;
  PartitionId pid = current_partition();
  if (pid < 0) return R::failure(StatusCode::InvalidState);
  Partition& par = *partitions_[pid];
  if (name.empty() || max_value == 0 || initial > max_value)
    return R::failure(StatusCode::ConfigInvalid);
  if (par.sem_names.count(name)) return R::failure(StatusCode::DuplicateName);
  if (charge_quota(pid, 64) != StatusCode::Ok)
    return R::failure(StatusCode::ResourceExhausted);
  auto s = std::make_unique<Semaphore>();
  s->id = static_cast<ObjectId>(semaphores_.size());
  s->partition = pid;
  s->name = std::string(name);
  s->value = initial;
  s->max_value = max_value;
  ObjectId id = s->id;
  par.sem_names[s->name] = id;
  semaphores_.push_back(std::move(s));
  emit(TraceKind::IpcOp, pid, current_, static_cast<std::uint64_t>(id), 0,
       "CREATE_SEMAPHORE");
  return R::success(id);
}

StatusCode Kernel::wait_semaphore(ObjectId id, std::uint64_t timeout) {
  charge_call("WAIT_SEMAPHORE");
  Semaphore* s = find_object(semaphores_, id);
  if (!s) return StatusCode::UnknownId;
  emit(TraceKind::IpcOp, s->partition, current_, static_cast<std::uint64_t>(id),
       s->value, "WAIT_SEMAPHORE");
  if (s->value > 0) {
    s->value--;
    return StatusCode::Ok;
  }
  if (timeout == 0) return StatusCode::TimedOut;
  if (current_ < 0) return StatusCode::InvalidState;
  return block_current(WaitKind::Semaphore, id, timeout, &s->waiters);
}

StatusCode Kernel::signal_semaphore(ObjectId id) {
  charge_call("SIGNAL_SEMAPHORE");
  Semaphore* s = find_object(semaphores_, id);
  if (!s) return StatusCode::UnknownId;
  emit(TraceKind::IpcOp, s->partition, current_, static_cast<std::uint64_t>(id),
       s->value, "SIGNAL_SEMAPHORE");
  if (!s->waiters.empty()) {
    ProcessId head = s->waiters.front();
    s->waiters.erase(s->waiters.begin());
    wake_process(head, StatusCode::Ok, false);
    preempt_point();
    return StatusCode::Ok;
  }
  if (s->value == s->max_value) return StatusCode::Overflow;
  s->value++;
  return StatusCode::Ok;
}

Result<ObjectId> Kernel::get_semaphore_id(std::string_view name) const {
  const_cast<Kernel*>(this)->charge_call("GET_SEMAPHORE_ID");
  using R = Result<ObjectId>;
  PartitionId pid = current_partition();
  if (pid < 0) return R::failure(StatusCode::InvalidState);
  const auto& names = partitions_[pid]->sem_names;
  auto it = names.find(name);
  if (it == names.end()) return R::failure(StatusCode::UnknownName);
  return R::success(it->second);
}

Result<SemaphoreStatusRec> Kernel::get_semaphore_status(ObjectId id) {
  charge_call("GET_SEMAPHORE_STATUS");
  using R = Result<SemaphoreStatusRec>;
  Semaphore* s = find_object(semaphores_, id);
  if (!s) return R::failure(StatusCode::UnknownId);
  return R::success(
      SemaphoreStatusRec{s->value, static_cast<std::uint32_t>(s->waiters.size())});
}

// ------------------------------------------------------------------ events

Result<ObjectId> Kernel::create_event(std::string_view name) {
  charge_call("CREATE_EVENT");
  using R = Result<ObjectId>;
  PartitionId pid = current_partition();
  if (pid < 0) return R::failure(StatusCode::InvalidState);
  Partition& par = *partitions_[pid];
  if (name.empty()) return R::failure(StatusCode::ConfigInvalid);
  if (par.event_names.count(name)) return R::failure(StatusCode::DuplicateName);
  if (charge_quota(pid, 64) != StatusCode::Ok)
    return R::failure(StatusCode::ResourceExhausted);
  auto e = std::make_unique<EventObj>();
  e->id = static_cast<ObjectId>(events_.size());
  e->partition = pid;
  e->name = std::string(name);
  ObjectId id = e->id;
  par.event_names[e->name] = id;
  events_.push_back(std::move(e));
  emit(TraceKind::IpcOp, pid, current_, static_cast<std::uint64_t>(id), 0, "CREATE_EVENT");
  return R::success(id);
}

StatusCode Kernel::set_event(ObjectId id) {
  charge_call("SET_EVENT");
  EventObj* e = find_object(events_, id);
  if (!e) return StatusCode::UnknownId;
  emit(TraceKind::IpcOp, e->partition, current_, static_cast<std::uint64_t>(id),
       e->waiters.size(), "SET_EVENT");
  e->up = true;
  release_waiters_of(e->waiters, StatusCode::Ok);
  preempt_point();
  return StatusCode::Ok;
}

StatusCode Kernel::reset_event(ObjectId id) {
  charge_call("RESET_EVENT");
  EventObj* e = find_object(events_, id);
  if (!e) return StatusCode::UnknownId;
  emit(TraceKind::IpcOp, e->partition, current_, static_cast<std::uint64_t>(id), 0,
       "RESET_EVENT");
  e->up = false;
  return StatusCode::Ok;
}

StatusCode Kernel::wait_event(ObjectId id, std::uint64_t timeout) {
  charge_call("WAIT_EVENT");
  EventObj* e = find_object(events_, id);
  if (!e) return StatusCode::UnknownId;
  emit(TraceKind::IpcOp, e->partition, current_, static_cast<std::uint64_t>(id),
       e->up ? 1 : 0, "WAIT_EVENT");
  if (e->up) return StatusCode::Ok;
  if (timeout == 0) return StatusCode::TimedOut;
  if (current_ < 0) return StatusCode::InvalidState;
  return block_current(WaitKind::Event, id, timeout, &e->waiters);
}

Result<ObjectId> Kernel::get_event_id(std::string_view name) const {
  const_cast<Kernel*>(this)->charge_call("GET_EVENT_ID");
  using R = Result<ObjectId>;
  PartitionId pid = current_partition();
  if (pid < 0) return R::failure(StatusCode::InvalidState);
  const auto& names = partitions_[pid]->event_names;
  auto it = names.find(name);
  if (it == names.end()) return R::failure(StatusCode::UnknownName);
  return R::success(it->second);
}

Result<EventStatusRec> Kernel::get_event_status(ObjectId id) {
  charge_call("GET_EVENT_STATUS");
  using R = Result<EventStatusRec>;
  EventObj* e = find_object(events_, id);
  if (!e) return R::failure(StatusCode::UnknownId);
  return R::success(EventStatusRec{e->up, static_cast<std::uint32_t>(e->waiters.size())});
}

// ----------------------------------------------------------------- mutexes

Result<ObjectId> Kernel::create_mutex(std::string_view name) {
  charge_call("CREATE_MUTEX");
  using R = Result<ObjectId>;
  PartitionId pid = current_partition();
  if (pid < 0) return R::failure(StatusCode::InvalidState);
  Partition& par = *partitions_[pid];
  if (name.empty()) return R::failure(StatusCode::ConfigInvalid);
  if (par.mutex_names.count(name)) return R::failure(StatusCode::DuplicateName);
  if (charge_quota(pid, 64) != StatusCode::Ok)
    return R::failure(StatusCode::ResourceExhausted);
  auto m = std::make_unique<Mutex>();
  m->id = static_cast<ObjectId>(mutexes_.size());
  m->partition = pid;
  m->name = std::string(name);
  ObjectId id = m->id;
  par.mutex_names[m->name] = id;
  mutexes_.push_back(std::move(m));
  emit(TraceKind::IpcOp, pid, current_, static_cast<std::uint64_t>(id), 0, "CREATE_MUTEX");
  return R::success(id);
}

StatusCode Kernel::acquire_mutex(ObjectId id, std::uint64_t timeout) {
  charge_call("ACQUIRE_MUTEX");
  Mutex* m = find_object(mutexes_, id);
  if (!m) return StatusCode::UnknownId;
  if (current_ < 0) return StatusCode::InvalidState;
  emit(TraceKind::IpcOp, m->partition, current_, static_cast<std::uint64_t>(id),
       static_cast<std::uint64_t>(m->owner + 1), "ACQUIRE_MUTEX");
  if (m->owner < 0) {
    m->owner = current_;
    return StatusCode::Ok;
  }
  if (m->owner == current_) return StatusCode::InvalidState;
  if (timeout == 0) return StatusCode::TimedOut;
  // On success the releaser has already transferred ownership to us.
  return block_current(WaitKind::Mutex, id, timeout, &m->waiters);
}

StatusCode Kernel::release_mutex(ObjectId id) {
  charge_call("RELEASE_MUTEX");
  Mutex* m = find_object(mutexes_, id);
  if (!m) return StatusCode::UnknownId;
  if (current_ < 0) return StatusCode::InvalidState;
  if (m->owner != current_) return StatusCode::NotOwner;
  emit(TraceKind::IpcOp, m->partition, current_, static_cast<std::uint64_t>(id),
       m->waiters.size(), "RELEASE_MUTEX");
  if (!m->waiters.empty()) {
    ProcessId head = m->waiters.front();
    m->waiters.erase(m->waiters.begin());
    m->owner = head;
    wake_process(head, StatusCode::Ok, false);
    preempt_point();
  } else {
    m->owner = -1;
  }
  return StatusCode::Ok;
}

Result<ObjectId> Kernel::get_mutex_id(std::string_view name) const {
  const_cast<Kernel*>(this)->charge_call("GET_MUTEX_ID");
  using R = Result<ObjectId>;
  PartitionId pid = current_partition();
  if (pid < 0) return R::failure(StatusCode::InvalidState);
  const auto& names = partitions_[pid]->mutex_names;
  auto it = names.find(name);
  if (it == names.end()) return R::failure(StatusCode::UnknownName);
  return R::success(it->second);
}

// ------------------------------------------------------------- blackboards

Result<ObjectId> Kernel::create_blackboard(std::string_view name, std::uint32_t max_size) {
  charge_call("CREATE_BLACKBOARD");
  using R = Result<ObjectId>;
  PartitionId pid = current_partition();
  if (pid < 0) return R::failure(StatusCode::InvalidState);
  Partition& par = *partitions_[pid];
  if (name.empty() || max_size == 0) return R::failure(StatusCode::ConfigInvalid);
  if (par.bb_names.count(name)) return R::failure(StatusCode::DuplicateName);
  if (charge_quota(pid, 64 + max_size) != StatusCode::Ok)
    return R::failure(StatusCode::ResourceExhausted);
  auto b = std::make_unique<Blackboard>();
  b->id = static_cast<ObjectId>(blackboards_.size());
  b->partition = pid;
  b->name = std::string(name);
  b->max_size = max_size;
  ObjectId id = b->id;
  par.bb_names[b->name] = id;
  blackboards_.push_back(std::move(b));
  emit(TraceKind::IpcOp, pid, current_, static_cast<std::uint64_t>(id), 0,
       "CREATE_BLACKBOARD");
  return R::success(id);
}

StatusCode Kernel::display_blackboard(ObjectId id, std::span<const std::uint8_t> msg) {
  charge_call("DISPLAY_BLACKBOARD");
  Blackboard* b = find_object(blackboards_, id);
  if (!b) return StatusCode::UnknownId;
  if (msg.size() > b->max_size) return StatusCode::MsgTooLong;
  emit(TraceKind::IpcOp, b->partition, current_, static_cast<std::uint64_t>(id),
       msg.size(), "DISPLAY_BLACKBOARD");
  b->slot.emplace(msg.begin(), msg.end());
  if (!b->waiters.empty()) {
    for (ProcessId pid : b->waiters) pcbs_[pid]->xfer.assign(msg.begin(), msg.end());
    release_waiters_of(b->waiters, StatusCode::Ok);
    preempt_point();
  }
  return StatusCode::Ok;
}

Result<std::vector<std::uint8_t>> Kernel::read_blackboard(ObjectId id,
                                                          std::uint64_t timeout) {
  charge_call("READ_BLACKBOARD");
  using R = Result<std::vector<std::uint8_t>>;
  Blackboard* b = find_object(blackboards_, id);
  if (!b) return R::failure(StatusCode::UnknownId);
  emit(TraceKind::IpcOp, b->partition, current_, static_cast<std::uint64_t>(id),
       b->slot ? 1 : 0, "READ_BLACKBOARD");
  if (b->slot) return R::success(*b->slot);  // non-consuming
  if (timeout == 0) return R::failure(StatusCode::NoMessage);
  if (current_ < 0) return R::failure(StatusCode::InvalidState);
  StatusCode st = block_current(WaitKind::BlackboardRead, id, timeout, &b->waiters);
  if (st != StatusCode::Ok) return R::failure(st);
  return R::success(std::move(pcbs_[current_]->xfer));
}

StatusCode Kernel::clear_blackboard(ObjectId id) {
  charge_call("CLEAR_BLACKBOARD");
  Blackboard* b = find_object(blackboards_, id);
  if (!b) return StatusCode::UnknownId;
  emit(TraceKind::IpcOp, b->partition, current_, static_cast<std::uint64_t>(id), 0,
       "CLEAR_BLACKBOARD");
  b->slot.reset();
  return StatusCode::Ok;
}

Result<ObjectId> Kernel::get_blackboard_id(std::string_view name) const {
  const_cast<Kernel*>(this)->charge_call("GET_BLACKBOARD_ID");
  using R = Result<ObjectId>;
  PartitionId pid = current_partition();
  if (pid < 0) return R::failure(StatusCode::InvalidState);
  const auto& names = partitions_[pid]->bb_names;
  auto it = names.find(name);
  if (it == names.end()) return R::failure(StatusCode::UnknownName);
  return R::success(it->second);
}

// ----------------------------------------------------------------- buffers

Result<ObjectId> Kernel::create_buffer(std::string_view name, std::uint32_t capacity,
                                       std::uint32_t max_size) {
  charge_call("CREATE_BUFFER");
  using R = Result<ObjectId>;
  PartitionId pid = current_partition();
  if (pid < 0) return R::failure(StatusCode::InvalidState);
  Partition& par = *partitions_[pid];
  if (name.empty() || capacity == 0 || max_size == 0)
    return R::failure(StatusCode::ConfigInvalid);
  if (par.buf_names.count(name)) return R::failure(StatusCode::DuplicateName);
  if (charge_quota(pid, 64 + static_cast<std::uint64_t>(capacity) * max_size) !=
      StatusCode::Ok)
    return R::failure(StatusCode::ResourceExhausted);
  auto b = std::make_unique<BufferQueue>();
  b->id = static_cast<ObjectId>(buffers_.size());
  b->partition = pid;
  b->name = std::string(name);
  b->capacity = capacity;
  b->max_size = max_size;
  ObjectId id = b->id;
  par.buf_names[b->name] = id;
  buffers_.push_back(std::move(b));
  emit(TraceKind::IpcOp, pid, current_, static_cast<std::uint64_t>(id), 0, "CREATE_BUFFER");
  return R::success(id);
}

StatusCode Kernel::send_buffer(ObjectId id, std::span<const std::uint8_t> msg,
                               std::uint64_t timeout) {
  charge_call("SEND_BUFFER");
  BufferQueue* b = find_object(buffers_, id);
  if (!b) return StatusCode::UnknownId;
  if (msg.size() > b->max_size) return StatusCode::MsgTooLong;
  emit(TraceKind::IpcOp, b->partition, current_, static_cast<std::uint64_t>(id),
       msg.size(), "SEND_BUFFER");
  if (!b->receive_waiters.empty()) {
    ProcessId head = b->receive_waiters.front();
    b->receive_waiters.erase(b->receive_waiters.begin());
    pcbs_[head]->xfer.assign(msg.begin(), msg.end());
    wake_process(head, StatusCode::Ok, false);
    preempt_point();
    return StatusCode::Ok;
  }
  if (b->q.size() < b->capacity) {
    b->q.emplace_back(msg.begin(), msg.end());
    return StatusCode::Ok;
  }
  if (timeout == 0) return StatusCode::TimedOut;
  if (current_ < 0) return StatusCode::InvalidState;
  Pcb& p = *pcbs_[current_];
  p.pending_msg.assign(msg.begin(), msg.end());
  StatusCode st = block_current(WaitKind::BufferSend, id, timeout, &b->send_waiters);
  p.pending_msg.clear();
  return st;
}

Result<std::vector<std::uint8_t>> Kernel::receive_buffer(ObjectId id, std::uint64_t timeout) {
  charge_call("RECEIVE_BUFFER");
  using R = Result<std::vector<std::uint8_t>>;
  BufferQueue* b = find_object(buffers_, id);
  if (!b) return R::failure(StatusCode::UnknownId);
  emit(TraceKind::IpcOp, b->partition, current_, static_cast<std::uint64_t>(id),
       b->q.size(), "RECEIVE_BUFFER");
  if (!b->q.empty()) {
    std::vector<std::uint8_t> msg = std::move(b->q.front());
    b->q.pop_front();
    if (!b->send_waiters.empty()) {
      ProcessId head = b->send_waiters.front();
      b->send_waiters.erase(b->send_waiters.begin());
      b->q.push_back(pcbs_[head]->pending_msg);
      wake_process(head, StatusCode::Ok, false);
      preempt_point();
    }
    return R::success(std::move(msg));
  }
  if (timeout == 0) return R::failure(StatusCode::TimedOut);
  if (current_ < 0) return R::failure(StatusCode::InvalidState);
  StatusCode st = block_current(WaitKind::BufferReceive, id, timeout, &b->receive_waiters);
  if (st != StatusCode::Ok) return R::failure(st);
  return R::success(std::move(pcbs_[current_]->xfer));
}

Result<ObjectId> Kernel::get_buffer_id(std::string_view name) const {
  const_cast<Kernel*>(this)->charge_call("GET_BUFFER_ID");
  using R = Result<ObjectId>;
  PartitionId pid = current_partition();
  if (pid < 0) return R::failure(StatusCode::InvalidState);
  const auto& names = partitions_[pid]->buf_names;
  auto it = names.find(name);
  if (it == names.end()) return R::failure(StatusCode::UnknownName);
  return R::success(it->second);
}

// ---------------------------------------------------------- sampling ports

Result<ObjectId> Kernel::create_sampling_port(std::string_view name, std::uint32_t max_size,
                                              PortDirection dir,
                                              std::uint64_t refresh_period) {
  charge_call("CREATE_SAMPLING_PORT");
  using R = Result<ObjectId>;
  PartitionId pid = current_partition();
  if (pid < 0) return R::failure(StatusCode::InvalidState);
  if (name.empty() || max_size == 0) return R::failure(StatusCode::ConfigInvalid);
  if (port_names_.count(name)) return R::failure(StatusCode::DuplicateName);
  if (charge_quota(pid, 64 + max_size) != StatusCode::Ok)
    return R::failure(StatusCode::ResourceExhausted);
  auto sp = std::make_unique<SamplingPort>();
  sp->id = static_cast<ObjectId>(sampling_ports_.size());
  sp->partition = pid;
  sp->name = std::string(name);
  sp->dir = dir;
  sp->max_size = max_size;
  sp->refresh = refresh_period;
  ObjectId id = sp->id;
  port_names_[sp->name] = encode_port_id(id, true);
  sampling_ports_.push_back(std::move(sp));
  emit(TraceKind::IpcOp, pid, current_, static_cast<std::uint64_t>(id), 0,
       "CREATE_SAMPLING_PORT");
  return R::success(id);
}

StatusCode Kernel::write_sampling_message(ObjectId id, std::span<const std::uint8_t> msg) {
  charge_call("WRITE_SAMPLING_MESSAGE");
  SamplingPort* sp = find_object(sampling_ports_, id);
  if (!sp) return StatusCode::UnknownId;
  if (sp->dir != PortDirection::Source) return StatusCode::DirectionMismatch;
  if (msg.size() > sp->max_size) return StatusCode::MsgTooLong;
  emit(TraceKind::IpcOp, sp->partition, current_, static_cast<std::uint64_t>(id),
       msg.size(), "WRITE_SAMPLING_MESSAGE");
  // The source port's slot is the channel storage; destination reads resolve
  // to it by name, so the endpoints may be created in any window order.
  sp->slot.emplace(msg.begin(), msg.end());
  sp->write_tick = clock_.now_ticks();
  return StatusCode::Ok;
}

Result<Kernel::SamplingRead> Kernel::read_sampling_message(ObjectId id) {
  charge_call("READ_SAMPLING_MESSAGE");
  using R = Result<SamplingRead>;
  SamplingPort* sp = find_object(sampling_ports_, id);
  if (!sp) return R::failure(StatusCode::UnknownId);
  if (sp->dir != PortDirection::Destination)
    return R::failure(StatusCode::DirectionMismatch);
  const SamplingPort* store = sampling_source_of(sp->name);
  emit(TraceKind::IpcOp, sp->partition, current_, static_cast<std::uint64_t>(id),
       store && store->slot ? 1 : 0, "READ_SAMPLING_MESSAGE");
  if (!store || !store->slot) return R::failure(StatusCode::NoMessage);
  SamplingRead out;
  out.message = *store->slot;
  out.valid = clock_.now_ticks() - store->write_tick <= sp->refresh;
  return R::success(std::move(out));
}

Result<ObjectId> Kernel::get_sampling_port_id(std::string_view name) const {
  const_cast<Kernel*>(this)->charge_call("GET_SAMPLING_PORT_ID");
  using R = Result<ObjectId>;
  auto it = port_names_.find(name);
  if (it == port_names_.end() || !port_id_is_sampling(it->second))
    return R::failure(StatusCode::UnknownName);
  return R::success(decode_port_id(it->second));
}

Result<SamplingPortStatusRec> Kernel::get_sampling_port_status(ObjectId id) {
  charge_call("GET_SAMPLING_PORT_STATUS");
  using R = Result<SamplingPortStatusRec>;
  SamplingPort* sp = find_object(sampling_ports_, id);
  if (!sp) return R::failure(StatusCode::UnknownId);
  const SamplingPort* store =
      sp->dir == PortDirection::Source ? sp : sampling_source_of(sp->name);
  SamplingPortStatusRec rec;
  rec.has_message = store && store->slot.has_value();
  rec.last_write_tick = store ? store->write_tick : 0;
  rec.refresh_period_ticks = sp->refresh;
  rec.valid =
      rec.has_message && clock_.now_ticks() - store->write_tick <= sp->refresh;
  return R::success(rec);
}

// ----------------------------------------------------------- queuing ports

Result<ObjectId> Kernel::create_queuing_port(std::string_view name, std::uint32_t capacity,
                                             std::uint32_t max_size, PortDirection dir) {
  charge_call("CREATE_QUEUING_PORT");
  using R = Result<ObjectId>;
  PartitionId pid = current_partition();
  if (pid < 0) return R::failure(StatusCode::InvalidState);
  if (name.empty() || capacity == 0 || max_size == 0)
    return R::failure(StatusCode::ConfigInvalid);
  if (port_names_.count(name)) return R::failure(StatusCode::DuplicateName);
  if (charge_quota(pid, 64 + static_cast<std::uint64_t>(capacity) * max_size) !=
      StatusCode::Ok)
    return R::failure(StatusCode::ResourceExhausted);
  auto qp = std::make_unique<QueuingPort>();
  qp->id = static_cast<ObjectId>(queuing_ports_.size());
  qp->partition = pid;
  qp->name = std::string(name);
  qp->dir = dir;
  qp->capacity = capacity;
  qp->max_size = max_size;
  ObjectId id = qp->id;
  port_names_[qp->name] = encode_port_id(id, false);
  queuing_ports_.push_back(std::move(qp));
  emit(TraceKind::IpcOp, pid, current_, static_cast<std::uint64_t>(id), 0,
       "CREATE_QUEUING_PORT");
  return R::success(id);
}

StatusCode Kernel::send_queuing_message(ObjectId id, std::span<const std::uint8_t> msg,
                                        std::uint64_t timeout) {
  charge_call("SEND_QUEUING_MESSAGE");
  QueuingPort* src = find_object(queuing_ports_, id);
  if (!src) return StatusCode::UnknownId;
  if (src->dir != PortDirection::Source) return StatusCode::DirectionMismatch;
  if (msg.size() > src->max_size) return StatusCode::MsgTooLong;
  emit(TraceKind::IpcOp, src->partition, current_, static_cast<std::uint64_t>(id),
       msg.size(), "SEND_QUEUING_MESSAGE");
  // The source port's queue is the channel storage. A destination created in
  // a later window still drains everything queued here before it existed.
  if (!src->receive_waiters.empty()) {
    ProcessId head = src->receive_waiters.front();
    src->receive_waiters.erase(src->receive_waiters.begin());
    pcbs_[head]->xfer.assign(msg.begin(), msg.end());
    wake_process(head, StatusCode::Ok, false);
    preempt_point();
    return StatusCode::Ok;
  }
  if (src->q.size() < src->capacity) {
    src->q.emplace_back(msg.begin(), msg.end());
    return StatusCode::Ok;
  }
  if (timeout == 0) return StatusCode::TimedOut;
  if (current_ < 0) return StatusCode::InvalidState;
  Pcb& p = *pcbs_[current_];
  p.pending_msg.assign(msg.begin(), msg.end());
  StatusCode st = block_current(WaitKind::QueuingSend, src->id, timeout, &src->send_waiters);
  p.pending_msg.clear();
  return st;
}

Result<std::vector<std::uint8_t>> Kernel::receive_queuing_message(ObjectId id,
                                                                  std::uint64_t timeout) {
  charge_call("RECEIVE_QUEUING_MESSAGE");
  using R = Result<std::vector<std::uint8_t>>;
  QueuingPort* dst = find_object(queuing_ports_, id);
  if (!dst) return R::failure(StatusCode::UnknownId);
  if (dst->dir != PortDirection::Destination)
    return R::failure(StatusCode::DirectionMismatch);
  QueuingPort* store = queuing_source_of(dst->name);
  emit(TraceKind::IpcOp, dst->partition, current_, static_cast<std::uint64_t>(id),
       store ? store->q.size() : 0, "RECEIVE_QUEUING_MESSAGE");
  if (store && !store->q.empty()) {
    std::vector<std::uint8_t> msg = std::move(store->q.front());
    store->q.pop_front();
    if (!store->send_waiters.empty()) {
      ProcessId head = store->send_waiters.front();
      store->send_waiters.erase(store->send_waiters.begin());
      store->q.push_back(pcbs_[head]->pending_msg);
      wake_process(head, StatusCode::Ok, false);
      preempt_point();
    }
    return R::success(std::move(msg));
  }
  if (timeout == 0) return R::failure(StatusCode::TimedOut);
  if (current_ < 0) return R::failure(StatusCode::InvalidState);
  // An unbound destination can still wait; nothing ever lands, so the wait
  // runs its timeout out on the port's own list.
  std::vector<ProcessId>* queue =
      store ? &store->receive_waiters : &dst->receive_waiters;
  StatusCode st = block_current(WaitKind::QueuingReceive, id, timeout, queue);
  if (st != StatusCode::Ok) return R::failure(st);
  return R::success(std::move(pcbs_[current_]->xfer));
}

Result<ObjectId> Kernel::get_queuing_port_id(std::string_view name) const {
  const_cast<Kernel*>(this)->charge_call("GET_QUEUING_PORT_ID");
  using R = Result<ObjectId>;
  auto it = port_names_.find(name);
  if (it == port_names_.end() || port_id_is_sampling(it->second))
    return R::failure(StatusCode::UnknownName);
  return R::success(decode_port_id(it->second));
}

Result<QueuingPortStatusRec> Kernel::get_queuing_port_status(ObjectId id) {
  charge_call("GET_QUEUING_PORT_STATUS");
  using R = Result<QueuingPortStatusRec>;
  QueuingPort* qp = find_object(queuing_ports_, id);
  if (!qp) return R::failure(StatusCode::UnknownId);
  const QueuingPort* store =
      qp->dir == PortDirection::Source ? qp : queuing_source_of(qp->name);
  QueuingPortStatusRec rec;
  rec.queued = store ? static_cast<std::uint32_t>(store->q.size()) : 0;
  rec.capacity = qp->capacity;
  rec.send_waiters =
      store ? static_cast<std::uint32_t>(store->send_waiters.size()) : 0;
  rec.receive_waiters =
      store ? static_cast<std::uint32_t>(store->receive_waiters.size())
            : static_cast<std::uint32_t>(qp->receive_waiters.size());
  return R::success(rec);
}

// --------------------------------------------------------- channel routing

Kernel::SamplingPort* Kernel::sampling_source_of(const std::string& dest_port) {
  for (const auto& ch : cfg_.channels) {
    if (ch.dest_port != dest_port) continue;
    auto it = port_names_.find(ch.source_port);
    if (it == port_names_.end() || !port_id_is_sampling(it->second)) return nullptr;
    SamplingPort* src = sampling_ports_[decode_port_id(it->second)].get();
    if (!src || src->dead || src->dir != PortDirection::Source) return nullptr;
    return src;
  }
  return nullptr;
}

Kernel::QueuingPort* Kernel::queuing_source_of(const std::string& dest_port) {
  for (const auto& ch : cfg_.channels) {
    if (ch.dest_port != dest_port) continue;
    auto it = port_names_.find(ch.source_port);
    if (it == port_names_.end() || port_id_is_sampling(it->second)) return nullptr;
    QueuingPort* src = queuing_ports_[decode_port_id(it->second)].get();
    if (!src || src->dead || src->dir != PortDirection::Source) return nullptr;
    return src;
  }
  return nullptr;
}

}  // namespace sfp
