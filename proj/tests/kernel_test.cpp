#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "sfpbench/kernel.hpp"

using namespace sfp;

namespace {

SystemConfig solo_cfg() {
  SystemConfig cfg;
  cfg.major_frame_ticks = 1u << 20;
  cfg.partitions.push_back({"solo", 1 << 20});
  cfg.windows.push_back({0, 0, 1u << 20});
  return cfg;
}

SystemConfig duo_cfg(std::uint64_t window = 5000) {
  SystemConfig cfg;
  cfg.major_frame_ticks = 2 * window;
  cfg.partitions.push_back({"left", 1 << 20});
  cfg.partitions.push_back({"right", 1 << 20});
  cfg.windows.push_back({0, 0, window});
  cfg.windows.push_back({1, window, window});
  return cfg;
}

ProcessAttributes task(std::string name, int priority, std::function<void()> entry) {
  ProcessAttributes a;
  a.name = std::move(name);
  a.priority = priority;
  a.entry = std::move(entry);
  return a;
}

}  // namespace

TEST_CASE("a config failing validation refuses to boot") {
  SystemConfig cfg = solo_cfg();
  cfg.windows.clear();  // partition without a window
  Kernel k(cfg);
  CHECK_FALSE(k.booted());
  CHECK(k.run(RunBounds::quiescent()) != StatusCode::Ok);
}

TEST_CASE("a topology-free config refuses to boot") {
  Kernel k(SystemConfig{});
  CHECK_FALSE(k.booted());
}

TEST_CASE("service calls charge their table cost against the clock") {
  SystemConfig cfg = solo_cfg();
  cfg.costs.default_cost = 10;
  cfg.costs.entries["GET_CURRENT_TICKS"] = 7;
  Kernel k(cfg);
  REQUIRE(k.booted());

  std::uint64_t delta = 0;
  k.set_partition_entry(0, [&] {
    auto attrs = task("probe", 10, [&] {
      const std::uint64_t t0 = k.get_current_ticks().value;
      const std::uint64_t t1 = k.get_current_ticks().value;
      delta = t1 - t0;
    });
    k.start_process(k.create_process(0, attrs).value);
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
  CHECK(delta == 7);
}

TEST_CASE("higher priority runs first, equal priority in creation order") {
  Kernel k(solo_cfg());
  REQUIRE(k.booted());

  std::vector<std::string> order;
  k.set_partition_entry(0, [&] {
    auto spawn = [&](std::string name, int prio) {
      auto attrs = task(name, prio, [&, name] { order.push_back(name); });
      k.start_process(k.create_process(0, attrs).value);
    };
    spawn("low_a", 10);
    spawn("high", 50);
    spawn("low_b", 10);
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
  REQUIRE(order.size() == 3);
  CHECK(order[0] == "high");
  CHECK(order[1] == "low_a");
  CHECK(order[2] == "low_b");
}

TEST_CASE("yield rotates equal-priority processes without charging time") {
  Kernel k(solo_cfg());
  REQUIRE(k.booted());

  std::vector<int> sequence;
  k.set_partition_entry(0, [&] {
    for (int id = 0; id < 3; ++id) {
      auto attrs = task("spin" + std::to_string(id), 10, [&, id] {
        for (int round = 0; round < 3; ++round) {
          sequence.push_back(id);
          k.yield();
        }
      });
      k.start_process(k.create_process(0, attrs).value);
    }
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
  const std::vector<int> want{0, 1, 2, 0, 1, 2, 0, 1, 2};
  CHECK(sequence == want);
}

TEST_CASE("raising a priority preempts the running process") {
  Kernel k(solo_cfg());
  REQUIRE(k.booted());

  std::vector<std::string> order;
  k.set_partition_entry(0, [&] {
    ObjectId gate = k.create_semaphore("gate", 0, 1).value;
    auto sleeper = task("sleeper", 5, [&] {
      k.wait_semaphore(gate, kInfiniteTime);
      order.push_back("sleeper_awake");
    });
    ProcessId sleeper_id = k.create_process(0, sleeper).value;
    k.start_process(sleeper_id);

    auto main_attrs = task("main", 10, [&] {
      k.signal_semaphore(gate);  // sleeper now ready at priority 5
      order.push_back("before_boost");
      k.set_priority(k.get_process_id("sleeper").value, 90);
      order.push_back("after_boost");
    });
    k.start_process(k.create_process(0, main_attrs).value);
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
  REQUIRE(order.size() == 3);
  CHECK(order[0] == "before_boost");
  CHECK(order[1] == "sleeper_awake");  // boost preempted main immediately
  CHECK(order[2] == "after_boost");
}

TEST_CASE("preemption lock defers a wake until the unlock") {
  Kernel k(solo_cfg());
  REQUIRE(k.booted());

  std::vector<std::string> order;
  k.set_partition_entry(0, [&] {
    ObjectId gate = k.create_semaphore("gate", 0, 1).value;
    auto urgent = task("urgent", 90, [&] {
      k.wait_semaphore(gate, kInfiniteTime);
      order.push_back("urgent");
    });
    k.start_process(k.create_process(0, urgent).value);

    auto main_attrs = task("main", 10, [&] {
      k.lock_preemption();
      k.signal_semaphore(gate);
      order.push_back("still_running");
      k.unlock_preemption();
      order.push_back("after_unlock");
    });
    k.start_process(k.create_process(0, main_attrs).value);
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
  REQUIRE(order.size() == 3);
  CHECK(order[0] == "still_running");
  CHECK(order[1] == "urgent");
  CHECK(order[2] == "after_unlock");
}

TEST_CASE("semaphore timeout expires after exactly the requested ticks") {
  SystemConfig cfg = solo_cfg();
  cfg.costs.default_cost = 10;
  Kernel k(cfg);
  REQUIRE(k.booted());

  std::uint64_t t0 = 0, t1 = 0;
  StatusCode wait_rc = StatusCode::Ok;
  k.set_partition_entry(0, [&] {
    ObjectId sem = k.create_semaphore("empty", 0, 1).value;
    auto attrs = task("waiter", 10, [&] {
      t0 = k.get_current_ticks().value;
      wait_rc = k.wait_semaphore(sem, 500);
      t1 = k.get_current_ticks().value;
    });
    k.start_process(k.create_process(0, attrs).value);
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
  CHECK(wait_rc == StatusCode::TimedOut);
  // t0 reads the clock after its own charge; the wait charges its cost,
  // blocks for exactly 500, and the closing read charges again before
  // reporting. The two service charges bracket the pure timeout span.
  const std::uint64_t wait_cost = k.config().costs.cost_of("WAIT_SEMAPHORE");
  const std::uint64_t now_cost = k.config().costs.cost_of("GET_CURRENT_TICKS");
  CHECK(t1 - t0 == wait_cost + 500 + now_cost);
}

TEST_CASE("zero timeout fails immediately without blocking") {
  Kernel k(solo_cfg());
  REQUIRE(k.booted());

  StatusCode rc = StatusCode::Ok;
  k.set_partition_entry(0, [&] {
    ObjectId sem = k.create_semaphore("empty", 0, 1).value;
    auto attrs = task("poller", 10, [&] { rc = k.wait_semaphore(sem, 0); });
    k.start_process(k.create_process(0, attrs).value);
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
  CHECK(rc == StatusCode::TimedOut);
}

TEST_CASE("windows confine each partition to its slice of the frame") {
  Kernel k(duo_cfg(5000));
  k.enable_trace();
  REQUIRE(k.booted());

  for (PartitionId p = 0; p < 2; ++p) {
    k.set_partition_entry(p, [&k, p] {
      auto attrs = task("worker" + std::to_string(p), 10, [&k] {
        for (int i = 0; i < 200; ++i) k.get_current_ticks();
      });
      k.start_process(k.create_process(p, attrs).value);
    });
  }
  REQUIRE(k.run(RunBounds::frames(2)) == StatusCode::Ok);

  for (const auto& e : k.trace()) {
    if (e.partition < 0) continue;
    const std::uint64_t in_frame = e.tick % 10000;
    // Boundary events legitimately land on the edge tick shared by two
    // windows; interior events must match the owning window.
    if (in_frame % 5000 == 0) continue;
    CHECK(e.partition == (in_frame < 5000 ? 0 : 1));
  }
}

TEST_CASE("every frame repeats the window sequence of frame zero") {
  Kernel k(duo_cfg(3000));
  k.enable_trace();
  REQUIRE(k.booted());
  for (PartitionId p = 0; p < 2; ++p) {
    k.set_partition_entry(p, [&k, p] {
      auto attrs = task("w" + std::to_string(p), 10, [&k] {
        for (int i = 0; i < 5; ++i) k.yield();
      });
      k.start_process(k.create_process(p, attrs).value);
    });
  }
  REQUIRE(k.run(RunBounds::frames(4)) == StatusCode::Ok);

  std::vector<std::vector<std::int32_t>> frames(4);
  for (const auto& e : k.trace())
    if (e.kind == TraceKind::WindowStart && e.b < 4)
      frames[e.b].push_back(e.partition);
  REQUIRE(frames[0].size() == 2);
  for (int f = 1; f < 4; ++f) CHECK(frames[f] == frames[0]);
}

TEST_CASE("windows smaller than the switch overhead cannot wedge a run") {
  // After the boot window, every boundary's switch overhead (1682 here)
  // swallows the whole 300-tick window, so only the first partition's init
  // ever executes; a bounded run must still terminate on time.
  Kernel k(duo_cfg(300));
  k.enable_trace();
  REQUIRE(k.booted());
  bool left_entered = false;
  bool right_entered = false;
  k.set_partition_entry(0, [&] { left_entered = true; });
  k.set_partition_entry(1, [&] { right_entered = true; });
  REQUIRE(k.run(RunBounds::frames(4)) == StatusCode::Ok);
  CHECK(k.now_raw() == 4 * 600);
  CHECK(left_entered);         // boot enters the first window switch-free
  CHECK_FALSE(right_entered);  // every later window is pure overhead
}

TEST_CASE("a charge crossing the window boundary resumes next window") {
  SystemConfig cfg = duo_cfg(100);
  cfg.costs.default_cost = 30;
  cfg.costs.partition_switch = 0;
  Kernel k(cfg);
  REQUIRE(k.booted());

  std::vector<std::uint64_t> stamps;
  k.set_partition_entry(0, [&] {
    auto attrs = task("crosser", 10, [&] {
      for (int i = 0; i < 5; ++i)
        stamps.push_back(k.get_current_ticks().value);
    });
    k.start_process(k.create_process(0, attrs).value);
  });
  k.set_partition_entry(1, [] {});
  REQUIRE(k.run(RunBounds::frames(3)) == StatusCode::Ok);

  // Partition 0 owns [0,100) of each 200-tick frame. The partition entry
  // machinery consumes part of the first window; each 30-tick charge that
  // does not fit before tick 100 completes in the next frame's window.
  REQUIRE(stamps.size() == 5);
  for (std::uint64_t t : stamps) {
    const std::uint64_t in_frame = t % 200;
    CHECK(in_frame > 0);
    CHECK(in_frame <= 100);
  }
  CHECK(stamps.back() > 200);  // the loop certainly spilled into later frames
}

TEST_CASE("partition switch gaps equal the configured cost once warm") {
  SystemConfig cfg = duo_cfg(1000);
  cfg.costs.partition_switch = 77;
  Kernel k(cfg);
  REQUIRE(k.booted());
  for (PartitionId p = 0; p < 2; ++p) {
    k.set_partition_entry(p, [&k, p] {
      auto attrs = task("s" + std::to_string(p), 10, [&k] {
        while (true) {
          if (k.yield() != StatusCode::Ok) return;
          if (k.get_current_ticks().value > 5 * 2000) return;
        }
      });
      k.start_process(k.create_process(p, attrs).value);
    });
  }
  REQUIRE(k.run(RunBounds::frames(5)) == StatusCode::Ok);

  const auto& gaps = k.partition_switch_gaps();
  REQUIRE(gaps.size() >= 4);
  for (std::size_t i = 2; i < gaps.size(); ++i) CHECK(gaps[i] == 77);
}

TEST_CASE("periodic processes release on their period and consume backlog") {
  SystemConfig cfg = solo_cfg();
  cfg.costs.default_cost = 1;
  Kernel k(cfg);
  REQUIRE(k.booted());

  std::vector<std::uint64_t> activations;
  k.set_partition_entry(0, [&] {
    ProcessAttributes a;
    a.name = "ticker";
    a.priority = 10;
    a.period_ticks = 1000;
    a.entry = [&] {
      for (int i = 0; i < 4; ++i) {
        k.periodic_wait();
        activations.push_back(k.get_current_ticks().value);
      }
    };
    k.start_process(k.create_process(0, a).value);
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);

  REQUIRE(activations.size() == 4);
  for (std::size_t i = 1; i < activations.size(); ++i) {
    const std::uint64_t gap = activations[i] - activations[i - 1];
    CHECK(gap == 1000);
  }
}

TEST_CASE("an aperiodic process cannot periodic_wait") {
  Kernel k(solo_cfg());
  REQUIRE(k.booted());
  StatusCode rc = StatusCode::Ok;
  k.set_partition_entry(0, [&] {
    auto attrs = task("oneshot", 10, [&] { rc = k.periodic_wait(); });
    k.start_process(k.create_process(0, attrs).value);
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
  CHECK(rc == StatusCode::InvalidState);
}

TEST_CASE("process status reflects lifecycle transitions") {
  Kernel k(solo_cfg());
  REQUIRE(k.booted());

  ProcState seen_self = ProcState::Dormant;
  ProcState seen_peer = ProcState::Dormant;
  ProcState after_exit = ProcState::Running;
  k.set_partition_entry(0, [&] {
    // Runs first (highest priority) and exits immediately.
    auto sprinter = task("sprinter", 50, [] {});
    ProcessId sprinter_id = k.create_process(0, sprinter).value;
    CHECK(k.get_process_status(sprinter_id).value.state == ProcState::Dormant);
    k.start_process(sprinter_id);

    ProcessId peer_id = k.create_process(0, task("peer", 10, [] {})).value;

    auto main_attrs = task("main", 10, [&, sprinter_id, peer_id] {
      seen_self = k.get_process_status(k.get_my_id().value).value.state;
      seen_peer = k.get_process_status(peer_id).value.state;
      after_exit = k.get_process_status(sprinter_id).value.state;
    });
    k.start_process(k.create_process(0, main_attrs).value);
    k.start_process(peer_id);  // ready after main in the FIFO rank
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
  CHECK(seen_self == ProcState::Running);
  CHECK(seen_peer == ProcState::Ready);
  CHECK(after_exit == ProcState::Dormant);
}

TEST_CASE("runtime process creation is refused unless configured") {
  SystemConfig cfg = solo_cfg();
  Kernel k(cfg);
  REQUIRE(k.booted());
  StatusCode rc = StatusCode::Ok;
  k.set_partition_entry(0, [&] {
    auto attrs = task("main", 10, [&] {
      auto r = k.create_process(0, task("late", 5, [] {}));
      rc = r.status;
    });
    k.start_process(k.create_process(0, attrs).value);
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
  CHECK(rc == StatusCode::InvalidState);
}

TEST_CASE("health monitor ignores by default and logs the error") {
  Kernel k(solo_cfg());
  k.enable_trace();
  REQUIRE(k.booted());
  HealthAction taken{};
  k.set_partition_entry(0, [&] {
    auto attrs = task("sinner", 10, [&] {
      taken = k.raise_error(ErrorCode::ApplicationError).value;
    });
    k.start_process(k.create_process(0, attrs).value);
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
  CHECK(taken == HealthAction::Ignore);

  bool logged = false;
  for (const auto& e : k.trace())
    if (e.kind == TraceKind::ErrorRaised &&
        e.a == static_cast<std::uint64_t>(ErrorCode::ApplicationError))
      logged = true;
  CHECK(logged);
}

TEST_CASE("health monitor can restart the offending process") {
  SystemConfig cfg = solo_cfg();
  cfg.hm.set(ErrorCode::NumericError, HealthAction::RestartProcess);
  Kernel k(cfg);
  REQUIRE(k.booted());

  int runs = 0;
  k.set_partition_entry(0, [&] {
    auto attrs = task("flaky", 10, [&] {
      ++runs;
      if (runs == 1) k.raise_error(ErrorCode::NumericError);
    });
    k.start_process(k.create_process(0, attrs).value);
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
  CHECK(runs == 2);
}

TEST_CASE("health monitor can stop the partition") {
  SystemConfig cfg = duo_cfg(5000);
  cfg.hm.set(ErrorCode::IllegalRequest, HealthAction::StopPartition);
  Kernel k(cfg);
  REQUIRE(k.booted());

  bool after_error = false;
  bool right_ran = false;
  k.set_partition_entry(0, [&] {
    auto attrs = task("offender", 10, [&] {
      k.raise_error(ErrorCode::IllegalRequest);
      after_error = true;  // must never execute
    });
    k.start_process(k.create_process(0, attrs).value);
  });
  k.set_partition_entry(1, [&] {
    auto attrs = task("bystander", 10, [&] { right_ran = true; });
    k.start_process(k.create_process(1, attrs).value);
  });
  REQUIRE(k.run(RunBounds::frames(2)) == StatusCode::Ok);
  CHECK_FALSE(after_error);
  CHECK(right_ran);
}

TEST_CASE("deadline misses are traced for late periodic processes") {
  SystemConfig cfg = solo_cfg();
  cfg.costs.default_cost = 1;
  Kernel k(cfg);
  k.enable_trace();
  REQUIRE(k.booted());

  k.set_partition_entry(0, [&] {
    ProcessAttributes a;
    a.name = "laggard";
    a.priority = 10;
    a.period_ticks = 100;
    a.deadline_ticks = 100;
    a.entry = [&] {
      for (int cycle = 0; cycle < 2; ++cycle) {
        k.periodic_wait();
        for (int i = 0; i < 300; ++i) k.get_current_ticks();  // ~300 ticks
      }
    };
    k.start_process(k.create_process(0, a).value);
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);

  bool missed = false;
  for (const auto& e : k.trace())
    if (e.kind == TraceKind::DeadlineMiss) missed = true;
  CHECK(missed);
}

TEST_CASE("run bounded by frames stops after that many frames") {
  Kernel k(duo_cfg(500));
  k.enable_trace();
  REQUIRE(k.booted());
  for (PartitionId p = 0; p < 2; ++p)
    k.set_partition_entry(p, [] {});
  REQUIRE(k.run(RunBounds::frames(3)) == StatusCode::Ok);

  std::uint64_t max_frame = 0;
  for (const auto& e : k.trace())
    if (e.kind == TraceKind::WindowStart) max_frame = std::max(max_frame, e.b);
  CHECK(max_frame == 2);
  CHECK(k.now_raw() == 3 * 1000);
}

TEST_CASE("quiescent runs end once nothing can ever run again") {
  Kernel k(solo_cfg());
  REQUIRE(k.booted());
  bool ran = false;
  k.set_partition_entry(0, [&] {
    ObjectId sem = k.create_semaphore("forever", 0, 1).value;
    auto attrs = task("parked", 10, [&, sem] {
      ran = true;
      k.wait_semaphore(sem, kInfiniteTime);  // nobody will ever signal
    });
    k.start_process(k.create_process(0, attrs).value);
  });
  CHECK(k.run(RunBounds::quiescent()) == StatusCode::Ok);
  CHECK(ran);
}

TEST_CASE("the trace renders one readable line per event") {
  Kernel k(solo_cfg());
  k.enable_trace();
  REQUIRE(k.booted());
  k.set_partition_entry(0, [&] {
    auto attrs = task("hello", 10, [&] { k.get_current_ticks(); });
    k.start_process(k.create_process(0, attrs).value);
  });
  REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);

  const std::string text = k.render_trace();
  CHECK(text.find("BOOT") != std::string::npos);
  CHECK(text.find("WINDOW_START") != std::string::npos);
  CHECK(text.find("solo") != std::string::npos);
  CHECK(text.find("hello") != std::string::npos);
}

TEST_CASE("services are rejected outside any run") {
  Kernel k(solo_cfg());
  REQUIRE(k.booted());
  CHECK_FALSE(k.get_my_id().ok());
  CHECK(k.yield() == StatusCode::InvalidState);
}
