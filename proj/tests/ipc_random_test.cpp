#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sfpbench/kernel.hpp"

// Each suite below runs 500 randomized scenarios against a hand-maintained
// reference model of the primitive: a FIFO queue for semaphore wakes and
// mutex handoff, a waiter set for event broadcast, sequence equality for
// buffer and queuing transport, and a single overwritten slot for sampling
// ports and blackboards. The scenario seed is captured so a failure can be
// replayed in isolation.

using namespace sfp;

namespace {

constexpr int kScenarios = 500;

SystemConfig solo_cfg() {
  SystemConfig cfg;
  cfg.major_frame_ticks = 1u << 20;
  cfg.partitions.push_back({"solo", 1 << 20});
  cfg.windows.push_back({0, 0, 1u << 20});
  return cfg;
}

SystemConfig duo_cfg() {
  SystemConfig cfg;
  cfg.major_frame_ticks = 10000;
  cfg.partitions.push_back({"first", 1 << 20});
  cfg.partitions.push_back({"second", 1 << 20});
  cfg.windows.push_back({0, 0, 5000});
  cfg.windows.push_back({1, 5000, 5000});
  return cfg;
}

ProcessAttributes task(std::string name, int priority, std::function<void()> entry) {
  ProcessAttributes a;
  a.name = std::move(name);
  a.priority = priority;
  a.entry = std::move(entry);
  return a;
}

int pick(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool coin(std::mt19937& rng) { return pick(rng, 0, 1) != 0; }

std::vector<std::uint8_t> rand_payload(std::mt19937& rng, int len) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(len));
  for (auto& b : v) b = static_cast<std::uint8_t>(pick(rng, 0, 255));
  return v;
}

// (tag, index) event records; tags below.
using Ev = std::pair<int, int>;
constexpr int kWoke = 1;
constexpr int kOwn = 2;
constexpr int kRel = 3;

}  // namespace

TEST_CASE("random semaphore scenarios wake blocked waiters in FIFO order") {
  for (int scn = 0; scn < kScenarios; ++scn) {
    CAPTURE(scn);
    std::mt19937 rng(0xA0000u + static_cast<unsigned>(scn));
    const int n = pick(rng, 1, 6);
    const std::uint32_t v0 = static_cast<std::uint32_t>(pick(rng, 0, 2));
    const std::uint32_t maxv = v0 + static_cast<std::uint32_t>(pick(rng, 1, 3));
    const int signals = pick(rng, 0, n + 2);

    // Op stream: every waiter is gated in exactly once, signals interleaved.
    std::vector<std::pair<char, int>> ops;
    for (int i = 0; i < n; ++i) ops.push_back({'W', i});
    for (int s = 0; s < signals; ++s) ops.push_back({'S', 0});
    std::shuffle(ops.begin(), ops.end(), rng);

    // Reference model.
    std::vector<Ev> expected;
    std::vector<StatusCode> expected_sig;
    std::vector<int> queue;
    std::uint32_t value = v0;
    for (const auto& op : ops) {
      if (op.first == 'W') {
        if (value > 0) {
          --value;
          expected.push_back({kWoke, op.second});
        } else {
          queue.push_back(op.second);
        }
      } else {
        if (!queue.empty()) {
          expected.push_back({kWoke, queue.front()});
          queue.erase(queue.begin());
          expected_sig.push_back(StatusCode::Ok);
        } else if (value < maxv) {
          ++value;
          expected_sig.push_back(StatusCode::Ok);
        } else {
          expected_sig.push_back(StatusCode::Overflow);
        }
      }
    }

    Kernel k(solo_cfg());
    REQUIRE(k.booted());
    std::vector<Ev> events;
    std::vector<StatusCode> sig_rcs;
    std::uint32_t end_value = 0, end_waiters = 0;
    k.set_partition_entry(0, [&] {
      ObjectId main_sem = k.create_semaphore("main", v0, maxv).value;
      std::vector<ObjectId> gates;
      for (int i = 0; i < n; ++i)
        gates.push_back(
            k.create_semaphore("gate" + std::to_string(i), 0, 1).value);
      for (int i = 0; i < n; ++i) {
        ObjectId gate = gates[static_cast<std::size_t>(i)];
        k.start_process(
            k.create_process(0, task("w" + std::to_string(i), 50, [&, gate,
                                                                   main_sem, i] {
               k.wait_semaphore(gate, kInfiniteTime);
               if (k.wait_semaphore(main_sem, kInfiniteTime) == StatusCode::Ok)
                 events.push_back({kWoke, i});
             })).value);
      }
      k.start_process(k.create_process(0, task("driver", 10, [&, gates,
                                                              main_sem] {
         for (const auto& op : ops) {
           if (op.first == 'W')
             k.signal_semaphore(gates[static_cast<std::size_t>(op.second)]);
           else
             sig_rcs.push_back(k.signal_semaphore(main_sem));
         }
         auto st = k.get_semaphore_status(main_sem).value;
         end_value = st.value;
         end_waiters = st.waiters;
       })).value);
    });
    REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
    CHECK(events == expected);
    CHECK(sig_rcs == expected_sig);
    CHECK(end_value == value);
    CHECK(end_waiters == queue.size());
  }
}

TEST_CASE("random mutex scenarios hand ownership over in FIFO order") {
  for (int scn = 0; scn < kScenarios; ++scn) {
    CAPTURE(scn);
    std::mt19937 rng(0xB0000u + static_cast<unsigned>(scn));
    const int n = pick(rng, 1, 5);

    // Build the op stream and the expected event sequence together: A<i>
    // gates contender i into its acquire, R releases the current owner.
    std::vector<int> pending(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pending[static_cast<std::size_t>(i)] = i;
    std::shuffle(pending.begin(), pending.end(), rng);
    std::vector<std::pair<char, int>> ops;
    std::vector<Ev> expected;
    std::vector<int> queue;
    int owner = -1;
    while (!pending.empty() || owner != -1) {
      bool do_acquire = !pending.empty() && (owner == -1 || coin(rng));
      if (do_acquire) {
        int i = pending.back();
        pending.pop_back();
        ops.push_back({'A', i});
        if (owner == -1) {
          owner = i;
          expected.push_back({kOwn, i});
        } else {
          queue.push_back(i);
        }
      } else {
        ops.push_back({'R', owner});
        expected.push_back({kRel, owner});
        if (!queue.empty()) {
          owner = queue.front();
          queue.erase(queue.begin());
          expected.push_back({kOwn, owner});
        } else {
          owner = -1;
        }
      }
    }

    Kernel k(solo_cfg());
    REQUIRE(k.booted());
    std::vector<Ev> events;
    k.set_partition_entry(0, [&] {
      ObjectId m = k.create_mutex("m").value;
      std::vector<ObjectId> gates, relgates;
      for (int i = 0; i < n; ++i) {
        gates.push_back(k.create_semaphore("g" + std::to_string(i), 0, 1).value);
        relgates.push_back(
            k.create_semaphore("r" + std::to_string(i), 0, 1).value);
      }
      for (int i = 0; i < n; ++i) {
        ObjectId gate = gates[static_cast<std::size_t>(i)];
        ObjectId relgate = relgates[static_cast<std::size_t>(i)];
        k.start_process(
            k.create_process(0, task("c" + std::to_string(i), 50, [&, gate,
                                                                   relgate, m,
                                                                   i] {
               k.wait_semaphore(gate, kInfiniteTime);
               k.acquire_mutex(m, kInfiniteTime);
               events.push_back({kOwn, i});
               k.wait_semaphore(relgate, kInfiniteTime);
               k.release_mutex(m);
               events.push_back({kRel, i});
             })).value);
      }
      k.start_process(k.create_process(0, task("driver", 10, [&, gates,
                                                              relgates] {
         for (const auto& op : ops) {
           if (op.first == 'A')
             k.signal_semaphore(gates[static_cast<std::size_t>(op.second)]);
           else
             k.signal_semaphore(relgates[static_cast<std::size_t>(op.second)]);
         }
       })).value);
    });
    REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
    CHECK(events == expected);
  }
}

TEST_CASE("random event scenarios release every waiter in one broadcast") {
  for (int scn = 0; scn < kScenarios; ++scn) {
    CAPTURE(scn);
    std::mt19937 rng(0xC0000u + static_cast<unsigned>(scn));
    const int n = pick(rng, 1, 5);
    std::vector<int> round1, round2;
    for (int i = 0; i < n; ++i) {
      switch (pick(rng, 0, 2)) {
        case 1: round1.push_back(i); break;
        case 2: round2.push_back(i); break;
        default: break;  // never gated in, stays parked
      }
    }
    const bool late = coin(rng);  // one waiter arrives while the event is up

    std::vector<Ev> expected;
    for (int i : round1) expected.push_back({kWoke, i});
    if (late) expected.push_back({kWoke, n});
    for (int i : round2) expected.push_back({kWoke, i});

    Kernel k(solo_cfg());
    REQUIRE(k.booted());
    std::vector<Ev> events;
    std::uint32_t before1 = 99, after1 = 99, before2 = 99, after2 = 99;
    std::uint64_t span1 = 0;
    k.set_partition_entry(0, [&] {
      ObjectId evt = k.create_event("evt").value;
      std::vector<ObjectId> gates;
      for (int i = 0; i <= n; ++i)
        gates.push_back(k.create_semaphore("g" + std::to_string(i), 0, 1).value);
      for (int i = 0; i <= n; ++i) {
        ObjectId gate = gates[static_cast<std::size_t>(i)];
        k.start_process(
            k.create_process(0, task("w" + std::to_string(i), 50, [&, gate, evt,
                                                                   i] {
               k.wait_semaphore(gate, kInfiniteTime);
               if (k.wait_event(evt, kInfiniteTime) == StatusCode::Ok)
                 events.push_back({kWoke, i});
             })).value);
      }
      k.start_process(k.create_process(0, task("driver", 10, [&, gates, evt] {
         for (int i : round1)
           k.signal_semaphore(gates[static_cast<std::size_t>(i)]);
         k.lock_preemption();
         std::uint64_t t0 = k.get_current_ticks().value;
         before1 = k.get_event_status(evt).value.waiters;
         k.set_event(evt);
         after1 = k.get_event_status(evt).value.waiters;
         std::uint64_t t1 = k.get_current_ticks().value;
         span1 = t1 - t0;
         k.unlock_preemption();
         if (late) k.signal_semaphore(gates[static_cast<std::size_t>(n)]);
         k.reset_event(evt);
         for (int i : round2)
           k.signal_semaphore(gates[static_cast<std::size_t>(i)]);
         k.lock_preemption();
         before2 = k.get_event_status(evt).value.waiters;
         k.set_event(evt);
         after2 = k.get_event_status(evt).value.waiters;
         k.unlock_preemption();
       })).value);
    });
    REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
    CHECK(events == expected);
    CHECK(before1 == round1.size());
    CHECK(after1 == 0);
    CHECK(before2 == round2.size());
    CHECK(after2 == 0);
    // The waiter set empties inside the one set_event call: the only ticks
    // between the surrounding probes are the charged costs of the calls.
    const auto& costs = k.config().costs;
    CHECK(span1 == 2 * costs.cost_of("GET_EVENT_STATUS") +
                       costs.cost_of("SET_EVENT") +
                       costs.cost_of("GET_CURRENT_TICKS"));
  }
}

TEST_CASE("random buffer scenarios preserve per-producer FIFO order") {
  for (int scn = 0; scn < kScenarios; ++scn) {
    CAPTURE(scn);
    std::mt19937 rng(0xD0000u + static_cast<unsigned>(scn));
    const int producers = pick(rng, 1, 3);
    const std::uint32_t capacity = static_cast<std::uint32_t>(pick(rng, 1, 4));
    std::vector<int> counts;
    int total = 0;
    for (int i = 0; i < producers; ++i) {
      counts.push_back(pick(rng, 0, 6));
      total += counts.back();
    }
    const int consumer_prio = coin(rng) ? 60 : 40;  // drain-eager or fill-first

    Kernel k(solo_cfg());
    REQUIRE(k.booted());
    std::vector<std::pair<int, int>> received;
    bool receive_failed = false;
    k.set_partition_entry(0, [&] {
      ObjectId buf = k.create_buffer("buf", capacity, 2).value;
      for (int i = 0; i < producers; ++i) {
        int m = counts[static_cast<std::size_t>(i)];
        k.start_process(
            k.create_process(0, task("p" + std::to_string(i), 50, [&, buf, i,
                                                                   m] {
               for (int seq = 0; seq < m; ++seq) {
                 std::vector<std::uint8_t> msg{static_cast<std::uint8_t>(i),
                                               static_cast<std::uint8_t>(seq)};
                 k.send_buffer(buf, msg, kInfiniteTime);
               }
             })).value);
      }
      k.start_process(
          k.create_process(0, task("consumer", consumer_prio, [&, buf] {
             for (int got = 0; got < total; ++got) {
               auto r = k.receive_buffer(buf, kInfiniteTime);
               if (!r.ok() || r.value.size() != 2) {
                 receive_failed = true;
                 return;
               }
               received.push_back({r.value[0], r.value[1]});
             }
           })).value);
    });
    REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
    CHECK_FALSE(receive_failed);
    CHECK(received.size() == static_cast<std::size_t>(total));
    for (int i = 0; i < producers; ++i) {
      std::vector<int> seqs;
      for (const auto& [prod, seq] : received)
        if (prod == i) seqs.push_back(seq);
      std::vector<int> want(static_cast<std::size_t>(counts[static_cast<std::size_t>(i)]));
      for (std::size_t s = 0; s < want.size(); ++s) want[s] = static_cast<int>(s);
      CHECK(seqs == want);
    }
  }
}

TEST_CASE("random queuing scenarios deliver byte-exact FIFO across partitions") {
  for (int scn = 0; scn < kScenarios; ++scn) {
    CAPTURE(scn);
    std::mt19937 rng(0xE0000u + static_cast<unsigned>(scn));
    const std::uint32_t capacity = static_cast<std::uint32_t>(pick(rng, 1, 4));
    const std::uint32_t max_size = static_cast<std::uint32_t>(pick(rng, 1, 8));
    const int m = pick(rng, 0, 10);
    std::vector<std::vector<std::uint8_t>> payloads;
    for (int i = 0; i < m; ++i)
      payloads.push_back(rand_payload(rng, pick(rng, 1, static_cast<int>(max_size))));

    SystemConfig cfg = duo_cfg();
    cfg.channels.push_back({"tx", "rx"});
    Kernel k(cfg);
    REQUIRE(k.booted());
    std::vector<std::vector<std::uint8_t>> received;
    std::vector<StatusCode> send_rcs;
    k.set_partition_entry(0, [&] {
      ObjectId tx = k.create_queuing_port("tx", capacity, max_size,
                                          PortDirection::Source).value;
      k.start_process(k.create_process(0, task("sender", 10, [&, tx] {
         for (const auto& p : payloads)
           send_rcs.push_back(k.send_queuing_message(tx, p, kInfiniteTime));
       })).value);
    });
    k.set_partition_entry(1, [&] {
      ObjectId rx = k.create_queuing_port("rx", capacity, max_size,
                                          PortDirection::Destination).value;
      k.start_process(k.create_process(1, task("receiver", 10, [&, rx] {
         for (int i = 0; i < m; ++i) {
           auto r = k.receive_queuing_message(rx, kInfiniteTime);
           if (!r.ok()) return;
           received.push_back(std::move(r.value));
         }
       })).value);
    });
    REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
    CHECK(received == payloads);
    CHECK(send_rcs == std::vector<StatusCode>(static_cast<std::size_t>(m),
                                              StatusCode::Ok));
  }
}

TEST_CASE("random sampling scenarios expose exactly the latest write") {
  for (int scn = 0; scn < kScenarios; ++scn) {
    CAPTURE(scn);
    std::mt19937 rng(0xF0000u + static_cast<unsigned>(scn));
    const int frames = pick(rng, 2, 5);
    const bool fresh = coin(rng);
    const std::uint64_t refresh = fresh ? (1ull << 40) : 3;

    // Writer activates in the second window of each frame; reader reads in
    // the first window, so a frame-f read sees the last write of frames < f.
    std::vector<std::vector<std::vector<std::uint8_t>>> writes_per_frame;
    for (int f = 0; f < frames; ++f) {
      std::vector<std::vector<std::uint8_t>> ws;
      int w = pick(rng, 0, 3);
      for (int i = 0; i < w; ++i) ws.push_back(rand_payload(rng, pick(rng, 1, 8)));
      writes_per_frame.push_back(std::move(ws));
    }
    std::vector<std::optional<std::vector<std::uint8_t>>> expected;
    std::optional<std::vector<std::uint8_t>> slot;
    for (int f = 0; f < frames; ++f) {
      expected.push_back(slot);
      for (const auto& w : writes_per_frame[static_cast<std::size_t>(f)]) slot = w;
    }

    SystemConfig cfg = duo_cfg();
    cfg.channels.push_back({"tx", "rx"});
    Kernel k(cfg);
    REQUIRE(k.booted());
    std::vector<std::optional<std::vector<std::uint8_t>>> reads;
    std::vector<bool> valids;
    k.set_partition_entry(0, [&] {
      ObjectId rx = k.create_sampling_port("rx", 8, PortDirection::Destination,
                                           refresh).value;
      auto attrs = task("reader", 10, [&, rx] {
        for (int f = 0; f < frames; ++f) {
          auto r = k.read_sampling_message(rx);
          if (r.ok()) {
            reads.push_back(r.value.message);
            valids.push_back(r.value.valid);
          } else {
            reads.push_back(std::nullopt);
            valids.push_back(false);
          }
          if (f + 1 < frames) k.periodic_wait();
        }
      });
      attrs.period_ticks = 10000;
      k.start_process(k.create_process(0, attrs).value);
    });
    k.set_partition_entry(1, [&] {
      ObjectId tx =
          k.create_sampling_port("tx", 8, PortDirection::Source, refresh).value;
      auto attrs = task("writer", 10, [&, tx] {
        for (int f = 0; f < frames; ++f) {
          for (const auto& w : writes_per_frame[static_cast<std::size_t>(f)])
            k.write_sampling_message(tx, w);
          if (f + 1 < frames) k.periodic_wait();
        }
      });
      attrs.period_ticks = 10000;
      k.start_process(k.create_process(1, attrs).value);
    });
    REQUIRE(k.run(RunBounds::frames(static_cast<std::uint64_t>(frames) + 1)) ==
            StatusCode::Ok);
    CHECK(reads == expected);
    for (std::size_t f = 0; f < valids.size(); ++f) {
      CAPTURE(f);
      // A present message is fresh only under the huge refresh period; the
      // 3-tick one always expires across the window switch.
      if (expected[f].has_value()) CHECK(valids[f] == fresh);
    }
  }
}

TEST_CASE("random blackboard scenarios behave as a single overwritten slot") {
  for (int scn = 0; scn < kScenarios; ++scn) {
    CAPTURE(scn);
    std::mt19937 rng(0x100000u + static_cast<unsigned>(scn));
    const std::uint32_t max_size = static_cast<std::uint32_t>(pick(rng, 2, 6));
    const int nops = pick(rng, 5, 25);

    enum OpKind { OpWrite, OpRead, OpClear };
    struct Op {
      OpKind kind;
      std::vector<std::uint8_t> payload;
    };
    std::vector<Op> ops;
    for (int i = 0; i < nops; ++i) {
      int roll = pick(rng, 0, 99);
      if (roll < 50) {
        bool oversize = pick(rng, 0, 4) == 0;
        int len = oversize ? pick(rng, static_cast<int>(max_size) + 1,
                                  static_cast<int>(max_size) + 3)
                           : pick(rng, 1, static_cast<int>(max_size));
        ops.push_back({OpWrite, rand_payload(rng, len)});
      } else if (roll < 85) {
        ops.push_back({OpRead, {}});
      } else {
        ops.push_back({OpClear, {}});
      }
    }

    // Reference slot model.
    std::vector<StatusCode> expected_write_rcs;
    std::vector<std::optional<std::vector<std::uint8_t>>> expected_reads;
    std::optional<std::vector<std::uint8_t>> slot;
    for (const auto& op : ops) {
      switch (op.kind) {
        case OpWrite:
          if (op.payload.size() > max_size) {
            expected_write_rcs.push_back(StatusCode::MsgTooLong);
          } else {
            expected_write_rcs.push_back(StatusCode::Ok);
            slot = op.payload;
          }
          break;
        case OpRead:
          expected_reads.push_back(slot);
          break;
        case OpClear:
          slot.reset();
          break;
      }
    }

    Kernel k(solo_cfg());
    REQUIRE(k.booted());
    std::vector<StatusCode> write_rcs;
    std::vector<std::optional<std::vector<std::uint8_t>>> read_results;
    k.set_partition_entry(0, [&] {
      ObjectId bb = k.create_blackboard("bb", max_size).value;
      k.start_process(k.create_process(0, task("driver", 10, [&, bb] {
         for (const auto& op : ops) {
           switch (op.kind) {
             case OpWrite:
               write_rcs.push_back(k.display_blackboard(bb, op.payload));
               break;
             case OpRead: {
               auto r = k.read_blackboard(bb, 0);
               if (r.ok())
                 read_results.push_back(std::move(r.value));
               else
                 read_results.push_back(std::nullopt);
               break;
             }
             case OpClear:
               k.clear_blackboard(bb);
               break;
           }
         }
       })).value);
    });
    REQUIRE(k.run(RunBounds::quiescent()) == StatusCode::Ok);
    CHECK(write_rcs == expected_write_rcs);
    CHECK(read_results == expected_reads);
  }
}
