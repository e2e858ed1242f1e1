#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "sfpbench/bench.hpp"
#include "sfpbench/data.hpp"
#include "sfpbench/kernels.hpp"
#include "sfpbench/porting.hpp"

namespace sfp {
namespace {

std::uint64_t pick_iters(const BenchParams& params, std::uint64_t fallback) {
  return params.iters != 0 ? params.iters : fallback;
}

StatusCode finish(PerfHost& host, std::vector<MeasureContext*> ctxs) {
  for (MeasureContext* ctx : ctxs) {
    auto r = host.validate_measure(*ctx, host.settings().with_stddev);
    if (!r.ok()) return r.status;
  }
  return StatusCode::Ok;
}

}  // namespace

// Five equal-priority processes hand the CPU around in a fixed rotation; the
// chained stamps time every hop except the wrap-around, which the lead
// process discards with a break.
StatusCode run_process_switch(PerfHost& host, const BenchParams& params) {
  const std::uint64_t iters = pick_iters(params, 1000);
  constexpr int kTasks = 5;

  MeasureContext ctx = host.declare_measure();
  host.initialize_measure(ctx, "Process Switch");

  auto part = host.declare_partition("proc_switch", [&host, &ctx, iters] {
    for (int t = 0; t < kTasks; ++t) {
      TaskSpec spec;
      spec.name = "rotor" + std::to_string(t);
      spec.priority = 10;
      spec.entry = [&host, &ctx, iters, t] {
        for (std::uint64_t it = 0; it < iters; ++it) {
          if (t == 0) host.chain_break(ctx);
          host.chain_stamp(ctx);
          host.yield();
        }
      };
      host.create_task(spec);
    }
  });
  if (!part.ok()) return part.status;

  StatusCode rc = host.run(RunBounds::quiescent());
  if (rc != StatusCode::Ok) return rc;
  return finish(host, {&ctx});
}

// One process times its acquire of a shared mutex, the other times its
// release; the yields keep ownership strictly alternating.
StatusCode run_mutex_acquire_release(PerfHost& host, const BenchParams& params) {
  const std::uint64_t iters = pick_iters(params, 1000);

  MeasureContext acq = host.declare_measure();
  MeasureContext rel = host.declare_measure();
  host.initialize_measure(acq, "Mutex Acquire");
  host.initialize_measure(rel, "Mutex Release");

  auto part = host.declare_partition("mutex_ar", [&host, &acq, &rel, iters] {
    auto m = host.create_mutex("m_shared");
    if (!m.ok()) return;
    const ObjectId mid = m.value;

    TaskSpec a;
    a.name = "locker";
    a.priority = 10;
    a.entry = [&host, &acq, mid, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.start_measure(acq);
        host.acquire_mutex(mid, kInfiniteTime);
        host.end_measure(acq);
        host.release_mutex(mid);
        host.yield();
      }
    };
    host.create_task(a);

    TaskSpec b;
    b.name = "unlocker";
    b.priority = 10;
    b.entry = [&host, &rel, mid, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.acquire_mutex(mid, kInfiniteTime);
        host.start_measure(rel);
        host.release_mutex(mid);
        host.end_measure(rel);
        host.yield();
      }
    };
    host.create_task(b);
  });
  if (!part.ok()) return part.status;

  StatusCode rc = host.run(RunBounds::quiescent());
  if (rc != StatusCode::Ok) return rc;
  return finish(host, {&acq, &rel});
}

namespace {

// Shared body for the two looped mutex benches. Each process cycles a
// private mutex so the loop body never blocks; they differ in where the
// timed span begins within the cycle.
StatusCode run_mutex_loop(PerfHost& host, const BenchParams& params,
                          const char* metric, bool lead_with_release) {
  const std::uint64_t iters = pick_iters(params, 1000);

  MeasureContext ctx = host.declare_measure();
  host.initialize_measure(ctx, metric);

  auto part = host.declare_partition("mutex_loop", [&host, &ctx, iters,
                                                    lead_with_release] {
    auto ma = host.create_mutex("m_timed");
    auto mb = host.create_mutex("m_plain");
    if (!ma.ok() || !mb.ok()) return;
    const ObjectId timed = ma.value;
    const ObjectId plain = mb.value;

    TaskSpec a;
    a.name = "timed";
    a.priority = 10;
    a.entry = [&host, &ctx, timed, iters, lead_with_release] {
      if (lead_with_release) {
        host.acquire_mutex(timed, kInfiniteTime);
        for (std::uint64_t it = 0; it < iters; ++it) {
          host.start_measure(ctx);
          host.release_mutex(timed);
          host.acquire_mutex(timed, kInfiniteTime);
          host.end_measure(ctx);
          host.yield();
        }
        host.release_mutex(timed);
      } else {
        for (std::uint64_t it = 0; it < iters; ++it) {
          host.start_measure(ctx);
          host.acquire_mutex(timed, kInfiniteTime);
          host.release_mutex(timed);
          host.end_measure(ctx);
          host.yield();
        }
      }
    };
    host.create_task(a);

    TaskSpec b;
    b.name = "plain";
    b.priority = 10;
    b.entry = [&host, plain, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.acquire_mutex(plain, kInfiniteTime);
        host.release_mutex(plain);
        host.yield();
      }
    };
    host.create_task(b);
  });
  if (!part.ok()) return part.status;

  StatusCode rc = host.run(RunBounds::quiescent());
  if (rc != StatusCode::Ok) return rc;
  return finish(host, {&ctx});
}

}  // namespace

StatusCode run_mutex_acquire_loop(PerfHost& host, const BenchParams& params) {
  return run_mutex_loop(host, params, "Mutex Acquire 2", false);
}

StatusCode run_mutex_release_loop(PerfHost& host, const BenchParams& params) {
  return run_mutex_loop(host, params, "Mutex Release 2", true);
}

// Two processes take turns running a checksum over the same 1 KiB block
// inside a shared critical section; the timed span covers the whole visit.
StatusCode run_mutex_workload(PerfHost& host, const BenchParams& params) {
  const std::uint64_t iters = pick_iters(params, 1000);

  MeasureContext ctx = host.declare_measure();
  host.initialize_measure(ctx, "Mutex Workload");

  Rng rng(params.seed);
  const std::vector<std::uint8_t> block = random_block(rng, 1024);
  std::uint32_t sink = 0;

  auto part = host.declare_partition("mutex_work", [&host, &ctx, &block, &sink,
                                                    iters] {
    auto m = host.create_mutex("m_work");
    if (!m.ok()) return;
    const ObjectId mid = m.value;

    TaskSpec a;
    a.name = "timed";
    a.priority = 10;
    a.entry = [&host, &ctx, &block, &sink, mid, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.start_measure(ctx);
        host.acquire_mutex(mid, kInfiniteTime);
        sink += additive_checksum(block);
        host.release_mutex(mid);
        host.end_measure(ctx);
        host.yield();
      }
    };
    host.create_task(a);

    TaskSpec b;
    b.name = "plain";
    b.priority = 10;
    b.entry = [&host, &block, &sink, mid, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.acquire_mutex(mid, kInfiniteTime);
        sink += additive_checksum(block);
        host.release_mutex(mid);
        host.yield();
      }
    };
    host.create_task(b);
  });
  if (!part.ok()) return part.status;

  StatusCode rc = host.run(RunBounds::quiescent());
  if (rc != StatusCode::Ok) return rc;
  return finish(host, {&ctx});
}

// Classic ping-pong: A times how long its wait takes, B times its signal.
StatusCode run_sem_wait_signal(PerfHost& host, const BenchParams& params) {
  const std::uint64_t iters = pick_iters(params, 1000);
  const auto cap = static_cast<std::uint32_t>(iters + 2);

  MeasureContext waits = host.declare_measure();
  MeasureContext signals = host.declare_measure();
  host.initialize_measure(waits, "Sem Wait");
  host.initialize_measure(signals, "Sem Signal");

  auto part = host.declare_partition("sem_ws", [&host, &waits, &signals, iters,
                                                cap] {
    auto sab = host.create_semaphore("s_ab", 1, cap);
    auto sba = host.create_semaphore("s_ba", 0, cap);
    if (!sab.ok() || !sba.ok()) return;
    const ObjectId ab = sab.value;
    const ObjectId ba = sba.value;

    TaskSpec a;
    a.name = "waiter";
    a.priority = 10;
    a.entry = [&host, &waits, ab, ba, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.start_measure(waits);
        host.wait_semaphore(ab, kInfiniteTime);
        host.end_measure(waits);
        host.signal_semaphore(ba);
        host.yield();
      }
    };
    host.create_task(a);

    TaskSpec b;
    b.name = "signaler";
    b.priority = 10;
    b.entry = [&host, &signals, ab, ba, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.wait_semaphore(ba, kInfiniteTime);
        host.start_measure(signals);
        host.signal_semaphore(ab);
        host.end_measure(signals);
      }
    };
    host.create_task(b);
  });
  if (!part.ok()) return part.status;

  StatusCode rc = host.run(RunBounds::quiescent());
  if (rc != StatusCode::Ok) return rc;
  return finish(host, {&waits, &signals});
}

// A low-priority driver signals while three higher-priority competitors
// queue on the semaphore. Preemption stays locked across the timed call so
// the wakeup it triggers cannot land inside the span.
StatusCode run_priority_sem(PerfHost& host, const BenchParams& params) {
  const std::uint64_t iters = pick_iters(params, 1000);

  MeasureContext ctx = host.declare_measure();
  host.initialize_measure(ctx, "Priority Sem");

  auto part = host.declare_partition("prio_sem", [&host, &ctx, iters] {
    auto sem = host.create_semaphore("s_contended", 0, 8);
    if (!sem.ok()) return;
    const ObjectId sid = sem.value;

    const int prios[3] = {30, 70, 50};
    for (int k = 0; k < 3; ++k) {
      const std::uint64_t share =
          iters / 3 + (static_cast<std::uint64_t>(k) < iters % 3 ? 1 : 0);
      TaskSpec c;
      c.name = "competitor" + std::to_string(k);
      c.priority = prios[k];
      c.entry = [&host, sid, share] {
        for (std::uint64_t it = 0; it < share; ++it)
          host.wait_semaphore(sid, kInfiniteTime);
      };
      host.create_task(c);
    }

    TaskSpec d;
    d.name = "driver";
    d.priority = 10;
    d.entry = [&host, &ctx, sid, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.lock_preemption();
        host.start_measure(ctx);
        host.signal_semaphore(sid);
        host.end_measure(ctx);
        host.unlock_preemption();
      }
    };
    host.create_task(d);
  });
  if (!part.ok()) return part.status;

  StatusCode rc = host.run(RunBounds::quiescent());
  if (rc != StatusCode::Ok) return rc;
  return finish(host, {&ctx});
}

namespace {

// Shared body for the two looped semaphore benches: single timed call per
// cycle on a semaphore sized so the call never blocks.
StatusCode run_sem_loop(PerfHost& host, const BenchParams& params,
                        const char* metric, bool timed_wait) {
  const std::uint64_t iters = pick_iters(params, 1000);
  const auto count = static_cast<std::uint32_t>(iters);
  const std::uint32_t initial = timed_wait ? count : 0;
  const std::uint32_t cap = timed_wait ? count : count + 2;

  MeasureContext ctx = host.declare_measure();
  host.initialize_measure(ctx, metric);

  auto part = host.declare_partition("sem_loop", [&host, &ctx, iters, initial,
                                                  cap, timed_wait] {
    auto sa = host.create_semaphore("s_timed", initial, cap);
    auto sb = host.create_semaphore("s_plain", initial, cap);
    if (!sa.ok() || !sb.ok()) return;
    const ObjectId timed = sa.value;
    const ObjectId plain = sb.value;

    TaskSpec a;
    a.name = "timed";
    a.priority = 10;
    a.entry = [&host, &ctx, timed, iters, timed_wait] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.start_measure(ctx);
        if (timed_wait)
          host.wait_semaphore(timed, kInfiniteTime);
        else
          host.signal_semaphore(timed);
        host.end_measure(ctx);
        host.yield();
      }
    };
    host.create_task(a);

    TaskSpec b;
    b.name = "plain";
    b.priority = 10;
    b.entry = [&host, plain, iters, timed_wait] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        if (timed_wait)
          host.wait_semaphore(plain, kInfiniteTime);
        else
          host.signal_semaphore(plain);
        host.yield();
      }
    };
    host.create_task(b);
  });
  if (!part.ok()) return part.status;

  StatusCode rc = host.run(RunBounds::quiescent());
  if (rc != StatusCode::Ok) return rc;
  return finish(host, {&ctx});
}

}  // namespace

StatusCode run_sem_signal_loop(PerfHost& host, const BenchParams& params) {
  return run_sem_loop(host, params, "Sem Signal 2", false);
}

StatusCode run_sem_wait_loop(PerfHost& host, const BenchParams& params) {
  return run_sem_loop(host, params, "Sem Wait 2", true);
}

// Ping-pong with a checksum between the wait and the answering signal; the
// timed span covers the whole synchronized visit.
StatusCode run_sem_workload(PerfHost& host, const BenchParams& params) {
  const std::uint64_t iters = pick_iters(params, 1000);
  const auto cap = static_cast<std::uint32_t>(iters + 2);

  MeasureContext ctx = host.declare_measure();
  host.initialize_measure(ctx, "Sem Workload");

  Rng rng(params.seed);
  const std::vector<std::uint8_t> block = random_block(rng, 1024);
  std::uint32_t sink = 0;

  auto part = host.declare_partition("sem_work", [&host, &ctx, &block, &sink,
                                                  iters, cap] {
    auto sab = host.create_semaphore("s_ab", 1, cap);
    auto sba = host.create_semaphore("s_ba", 0, cap);
    if (!sab.ok() || !sba.ok()) return;
    const ObjectId ab = sab.value;
    const ObjectId ba = sba.value;

    TaskSpec a;
    a.name = "timed";
    a.priority = 10;
    a.entry = [&host, &ctx, &block, &sink, ab, ba, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.start_measure(ctx);
        host.wait_semaphore(ab, kInfiniteTime);
        sink += additive_checksum(block);
        host.signal_semaphore(ba);
        host.end_measure(ctx);
        host.yield();
      }
    };
    host.create_task(a);

    TaskSpec b;
    b.name = "plain";
    b.priority = 10;
    b.entry = [&host, &block, &sink, ab, ba, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.wait_semaphore(ba, kInfiniteTime);
        sink += additive_checksum(block);
        host.signal_semaphore(ab);
      }
    };
    host.create_task(b);
  });
  if (!part.ok()) return part.status;

  StatusCode rc = host.run(RunBounds::quiescent());
  if (rc != StatusCode::Ok) return rc;
  return finish(host, {&ctx});
}

// Two partitions with back-to-back windows and a spinner in each. The hop
// cost comes out of the scheduler's boundary gap log; the first major frame
// is warm-up (partition init runs inside it), so its gaps are dropped.
StatusCode run_partition_switch(PerfHost& host, const BenchParams& params) {
  const std::uint64_t iters = pick_iters(params, 1000);
  constexpr std::uint64_t kWindow = 5000;
  const std::uint64_t frames = iters / 2 + 3;
  const std::uint64_t end_tick = frames * 2 * kWindow;

  MeasureContext ctx = host.declare_measure();
  host.initialize_measure(ctx, "Partition Switch");

  for (int p = 0; p < 2; ++p) {
    auto part = host.declare_partition(p == 0 ? "switch_a" : "switch_b",
                                       [&host, end_tick] {
                                         TaskSpec spec;
                                         spec.name = "spinner";
                                         spec.priority = 10;
                                         spec.entry = [&host, end_tick] {
                                           while (host.now() < end_tick) {
                                           }
                                         };
                                         host.create_task(spec);
                                       });
    if (!part.ok()) return part.status;
    StatusCode wrc = host.add_window(part.value, p * kWindow, kWindow);
    if (wrc != StatusCode::Ok) return wrc;
  }

  StatusCode rc = host.run(RunBounds::quiescent());
  if (rc != StatusCode::Ok) return rc;

  const std::vector<std::uint64_t> gaps = host.partition_switch_gaps();
  const std::size_t skip = 2;
  if (gaps.size() <= skip) return StatusCode::EmptySeries;
  const std::size_t take =
      std::min<std::size_t>(iters, gaps.size() - skip);
  for (std::size_t i = 0; i < take; ++i) host.add_sample(ctx, gaps[skip + i]);
  return finish(host, {&ctx});
}

}  // namespace sfp
