#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sfpbench/bench.hpp"
#include "sfpbench/porting.hpp"

namespace sfp {

// Report rows for the service-latency application, in catalog order. The
// message-bearing services appear once per payload size.
const std::vector<std::string>& apex_latency_calls() {
  static const std::vector<std::string> rows = {
      "GET_PARTITION_STATUS",
      "CREATE_SEMAPHORE",
      "CREATE_BUFFER",
      "CREATE_BLACKBOARD",
      "READ_BLACKBOARD(16)",
      "READ_BLACKBOARD(64)",
      "GET_BUFFER_ID",
      "SEND_BUFFER(16)",
      "SEND_BUFFER(64)",
      "RECEIVE_BUFFER(16)",
      "RECEIVE_BUFFER(64)",
      "DISPLAY_BLACKBOARD(16)",
      "DISPLAY_BLACKBOARD(64)",
      "WAIT_SEMAPHORE",
      "SET_PRIORITY",
      "GET_MY_ID",
      "GET_SEMAPHORE_STATUS",
      "CREATE_EVENT",
      "SET_EVENT",
      "GET_EVENT_ID",
      "GET_CURRENT_TICKS",
      "CREATE_QUEUING_PORT",
      "GET_QUEUING_PORT_ID",
      "GET_QUEUING_PORT_STATUS",
      "SEND_QUEUING_MESSAGE",
      "RECEIVE_QUEUING_MESSAGE",
      "WRITE_SAMPLING_MESSAGE",
      "READ_SAMPLING_MESSAGE",
      "SIGNAL_SEMAPHORE",
      "GET_PROCESS_STATUS",
      "WAIT_EVENT",
      "GET_SAMPLING_PORT_ID",
      "GET_SEMAPHORE_ID",
      "GET_PROCESS_ID",
      "GET_EVENT_STATUS",
      "CREATE_SAMPLING_PORT",
      "UNLOCK_PREEMPTION",
      "LOCK_PREEMPTION",
  };
  return rows;
}

// One process walks every service once per cycle (creation services twice,
// on fresh names) and times each call in isolation. Long-lived objects are
// set up untimed so none of the timed calls ever blocks.
StatusCode run_apex_latency(PerfHost& host, const BenchParams& params) {
  const std::uint64_t iters = params.iters != 0 ? params.iters : 1000;
  const auto count = static_cast<std::uint32_t>(iters);

  const auto& rows = apex_latency_calls();
  std::vector<MeasureContext> ctxs;
  ctxs.reserve(rows.size());
  for (const auto& row : rows) {
    ctxs.push_back(host.declare_measure());
    host.initialize_measure(ctxs.back(), row);
  }
  auto at = [&](std::string_view row) -> MeasureContext& {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i] == row) return ctxs[i];
    return ctxs[0];
  };

  host.add_channel("lat_qsrc", "lat_qdst");
  host.add_channel("lat_ssrc", "lat_sdst");

  auto part = host.declare_partition("apex_calls", [&host, &at, iters, count] {
    TaskSpec probe;
    probe.name = "apex_probe";
    probe.priority = 10;
    probe.entry = [&host, &at, iters, count] {
      constexpr std::uint64_t kRefresh = 1ull << 40;
      std::array<std::uint8_t, 16> msg16{};
      std::array<std::uint8_t, 64> msg64{};
      std::array<std::uint8_t, 32> msg32{};
      for (std::size_t i = 0; i < msg64.size(); ++i)
        msg64[i] = static_cast<std::uint8_t>(i);
      for (std::size_t i = 0; i < msg16.size(); ++i)
        msg16[i] = static_cast<std::uint8_t>(0x40 + i);
      for (std::size_t i = 0; i < msg32.size(); ++i)
        msg32[i] = static_cast<std::uint8_t>(0x80 + i);

      const ObjectId sem_drain = host.create_semaphore("lat_wait", count, count).value;
      const ObjectId sem_fill = host.create_semaphore("lat_sig", 0, count + 1).value;
      const ObjectId evt = host.create_event("lat_evt").value;
      host.set_event(evt);
      const ObjectId bb16 = host.create_blackboard("lat_bb16", 16).value;
      const ObjectId bb64 = host.create_blackboard("lat_bb64", 64).value;
      host.display_blackboard(bb16, msg16);
      host.display_blackboard(bb64, msg64);
      const ObjectId buf16 = host.create_buffer("lat_buf16", 4, 16).value;
      const ObjectId buf64 = host.create_buffer("lat_buf64", 4, 64).value;
      const ObjectId qsrc =
          host.create_queuing_port("lat_qsrc", 8, 32, PortDirection::Source).value;
      const ObjectId qdst =
          host.create_queuing_port("lat_qdst", 8, 32, PortDirection::Destination).value;
      const ObjectId ssrc =
          host.create_sampling_port("lat_ssrc", 32, PortDirection::Source, kRefresh).value;
      const ObjectId sdst =
          host.create_sampling_port("lat_sdst", 32, PortDirection::Destination, kRefresh)
              .value;
      host.write_sampling_message(ssrc, msg32);
      const ProcessId my = host.get_my_id().value;

      auto timed = [&host](MeasureContext& ctx, auto&& call) {
        host.start_measure(ctx);
        call();
        host.end_measure(ctx);
      };

      for (std::uint64_t it = 0; it < iters; ++it) {
        const std::string tag = std::to_string(it);

        timed(at("GET_PARTITION_STATUS"), [&] { host.get_partition_status(); });
        timed(at("CREATE_SEMAPHORE"),
              [&] { host.create_semaphore("cs_a" + tag, 0, 1); });
        timed(at("CREATE_SEMAPHORE"),
              [&] { host.create_semaphore("cs_b" + tag, 0, 1); });
        timed(at("CREATE_BUFFER"), [&] { host.create_buffer("cb_a" + tag, 1, 16); });
        timed(at("CREATE_BUFFER"), [&] { host.create_buffer("cb_b" + tag, 1, 16); });
        timed(at("CREATE_BLACKBOARD"),
              [&] { host.create_blackboard("cbb_a" + tag, 16); });
        timed(at("CREATE_BLACKBOARD"),
              [&] { host.create_blackboard("cbb_b" + tag, 16); });
        timed(at("READ_BLACKBOARD(16)"),
              [&] { host.read_blackboard(bb16, kInfiniteTime); });
        timed(at("READ_BLACKBOARD(64)"),
              [&] { host.read_blackboard(bb64, kInfiniteTime); });
        timed(at("GET_BUFFER_ID"), [&] { host.get_buffer_id("lat_buf16"); });
        timed(at("SEND_BUFFER(16)"),
              [&] { host.send_buffer(buf16, msg16, kInfiniteTime); });
        timed(at("SEND_BUFFER(64)"),
              [&] { host.send_buffer(buf64, msg64, kInfiniteTime); });
        timed(at("RECEIVE_BUFFER(16)"),
              [&] { host.receive_buffer(buf16, kInfiniteTime); });
        timed(at("RECEIVE_BUFFER(64)"),
              [&] { host.receive_buffer(buf64, kInfiniteTime); });
        timed(at("DISPLAY_BLACKBOARD(16)"),
              [&] { host.display_blackboard(bb16, msg16); });
        timed(at("DISPLAY_BLACKBOARD(64)"),
              [&] { host.display_blackboard(bb64, msg64); });
        timed(at("WAIT_SEMAPHORE"),
              [&] { host.wait_semaphore(sem_drain, kInfiniteTime); });
        timed(at("SET_PRIORITY"), [&] { host.set_priority(my, 10); });
        timed(at("GET_MY_ID"), [&] { host.get_my_id(); });
        timed(at("GET_SEMAPHORE_STATUS"),
              [&] { host.get_semaphore_status(sem_drain); });
        timed(at("CREATE_EVENT"), [&] { host.create_event("ce_a" + tag); });
        timed(at("CREATE_EVENT"), [&] { host.create_event("ce_b" + tag); });
        timed(at("SET_EVENT"), [&] { host.set_event(evt); });
        timed(at("GET_EVENT_ID"), [&] { host.get_event_id("lat_evt"); });
        timed(at("GET_CURRENT_TICKS"), [&] { host.now(); });
        timed(at("CREATE_QUEUING_PORT"), [&] {
          host.create_queuing_port("cq_a" + tag, 1, 16, PortDirection::Source);
        });
        timed(at("CREATE_QUEUING_PORT"), [&] {
          host.create_queuing_port("cq_b" + tag, 1, 16, PortDirection::Source);
        });
        timed(at("GET_QUEUING_PORT_ID"),
              [&] { host.get_queuing_port_id("lat_qsrc"); });
        timed(at("GET_QUEUING_PORT_STATUS"),
              [&] { host.get_queuing_port_status(qdst); });
        timed(at("SEND_QUEUING_MESSAGE"),
              [&] { host.send_queuing_message(qsrc, msg32, kInfiniteTime); });
        timed(at("RECEIVE_QUEUING_MESSAGE"),
              [&] { host.receive_queuing_message(qdst, kInfiniteTime); });
        timed(at("WRITE_SAMPLING_MESSAGE"),
              [&] { host.write_sampling_message(ssrc, msg32); });
        timed(at("READ_SAMPLING_MESSAGE"),
              [&] { host.read_sampling_message(sdst); });
        timed(at("SIGNAL_SEMAPHORE"), [&] { host.signal_semaphore(sem_fill); });
        timed(at("GET_PROCESS_STATUS"), [&] { host.get_process_status(my); });
        timed(at("WAIT_EVENT"), [&] { host.wait_event(evt, kInfiniteTime); });
        timed(at("GET_SAMPLING_PORT_ID"),
              [&] { host.get_sampling_port_id("lat_ssrc"); });
        timed(at("GET_SEMAPHORE_ID"), [&] { host.get_semaphore_id("lat_wait"); });
        timed(at("GET_PROCESS_ID"), [&] { host.get_process_id("apex_probe"); });
        timed(at("GET_EVENT_STATUS"), [&] { host.get_event_status(evt); });
        timed(at("CREATE_SAMPLING_PORT"), [&] {
          host.create_sampling_port("csp_a" + tag, 16, PortDirection::Source,
                                    kRefresh);
        });
        timed(at("CREATE_SAMPLING_PORT"), [&] {
          host.create_sampling_port("csp_b" + tag, 16, PortDirection::Source,
                                    kRefresh);
        });
        timed(at("LOCK_PREEMPTION"), [&] { host.lock_preemption(); });
        timed(at("UNLOCK_PREEMPTION"), [&] { host.unlock_preemption(); });
      }
    };
    host.create_task(probe);
  });
  if (!part.ok()) return part.status;

  StatusCode rc = host.run(RunBounds::quiescent());
  if (rc != StatusCode::Ok) return rc;

  for (auto& ctx : ctxs) {
    auto r = host.validate_measure(ctx, host.settings().with_stddev);
    if (!r.ok()) return r.status;
  }
  return StatusCode::Ok;
}

}  // namespace sfp
