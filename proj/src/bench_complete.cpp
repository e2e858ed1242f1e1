#include <array>
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

// Single process timing one end-to-end pass of a computation per cycle.
StatusCode run_compute_app(PerfHost& host, const BenchParams& params,
                           const char* metric,
                           const std::function<void()>& pass) {
  const std::uint64_t iters = pick_iters(params, 100);

  MeasureContext ctx = host.declare_measure();
  host.initialize_measure(ctx, metric);

  auto part = host.declare_partition(metric, [&host, &ctx, &pass, iters] {
    TaskSpec spec;
    spec.name = "worker";
    spec.priority = 10;
    spec.entry = [&host, &ctx, &pass, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.start_measure(ctx);
        pass();
        host.end_measure(ctx);
      }
    };
    host.create_task(spec);
  });
  if (!part.ok()) return part.status;

  StatusCode rc = host.run(RunBounds::quiescent());
  if (rc != StatusCode::Ok) return rc;
  return host.validate_measure(ctx, host.settings().with_stddev).status;
}

}  // namespace

StatusCode run_sobel_app(PerfHost& host, const BenchParams& params) {
  const Image img = default_image(params.seed);
  std::uint64_t sink = 0;
  return run_compute_app(host, params, "SOBEL", [&img, &sink] {
    auto out = sobel_pipeline(img);
    if (out.ok()) sink += out.value.pixels[0];
  });
}

StatusCode run_adpcm_app(PerfHost& host, const BenchParams& params) {
  const std::vector<std::int16_t> signal = default_signal(params.seed);
  std::uint64_t sink = 0;
  return run_compute_app(host, params, "ADPCM", [&signal, &sink] {
    const std::vector<std::uint8_t> encoded = adpcm_encode(signal);
    const std::vector<std::int16_t> decoded =
        adpcm_decode(encoded, signal.size());
    sink += static_cast<std::uint64_t>(
        static_cast<std::uint16_t>(decoded.back()));
  });
}

StatusCode run_dijkstra_app(PerfHost& host, const BenchParams& params) {
  const Graph g = default_graph(params.seed);
  std::uint64_t sink = 0;
  return run_compute_app(host, params, "DIJKSTRA", [&g, &sink] {
    auto dist = dijkstra(g, 0);
    if (dist.ok()) sink += dist.value.back();
  });
}

namespace {

// Four-stage relay shared by the two synthetic applications: stage k blocks
// until stage k-1 passes the baton, does its bit of work, and passes on.
// The single metric spans stage one's start through stage four's finish.
StatusCode run_relay_app(PerfHost& host, const BenchParams& params,
                         const char* metric, bool use_events) {
  const std::uint64_t iters = pick_iters(params, 100);
  const auto cap = static_cast<std::uint32_t>(iters + 2);

  MeasureContext ctx = host.declare_measure();
  host.initialize_measure(ctx, metric);

  auto part = host.declare_partition(metric, [&host, &ctx, iters, cap,
                                              use_events] {
    std::array<ObjectId, 4> link{};
    for (int i = 0; i < 4; ++i) {
      const std::string name = "link" + std::to_string(i);
      if (use_events) {
        auto r = host.create_event(name);
        if (!r.ok()) return;
        link[i] = r.value;
      } else {
        auto r = host.create_semaphore(name, 0, cap);
        if (!r.ok()) return;
        link[i] = r.value;
      }
    }

    auto pass_baton = [&host, use_events](ObjectId id) {
      if (use_events)
        host.set_event(id);
      else
        host.signal_semaphore(id);
    };
    auto take_baton = [&host, use_events](ObjectId id) {
      if (use_events) {
        host.wait_event(id, kInfiniteTime);
        host.reset_event(id);
      } else {
        host.wait_semaphore(id, kInfiniteTime);
      }
    };

    TaskSpec p1;
    p1.name = "stage1";
    p1.priority = 10;
    p1.entry = [&host, &ctx, &pass_baton, &take_baton, link, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.start_measure(ctx);
        host.now();
        pass_baton(link[0]);
        take_baton(link[3]);
      }
    };
    host.create_task(p1);

    TaskSpec p2;
    p2.name = "stage2";
    p2.priority = 10;
    p2.entry = [&host, &pass_baton, &take_baton, link, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        take_baton(link[0]);
        host.get_my_id();
        host.get_partition_status();
        host.now();
        pass_baton(link[1]);
      }
    };
    host.create_task(p2);

    TaskSpec p3;
    p3.name = "stage3";
    p3.priority = 10;
    p3.entry = [&host, &pass_baton, &take_baton, link, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        take_baton(link[1]);
        host.get_process_id("stage4");
        pass_baton(link[2]);
      }
    };
    host.create_task(p3);

    TaskSpec p4;
    p4.name = "stage4";
    p4.priority = 10;
    p4.entry = [&host, &ctx, &pass_baton, &take_baton, link, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        take_baton(link[2]);
        host.now();
        pass_baton(link[3]);
        host.end_measure(ctx);
      }
    };
    host.create_task(p4);
  });
  if (!part.ok()) return part.status;

  StatusCode rc = host.run(RunBounds::quiescent());
  if (rc != StatusCode::Ok) return rc;
  return host.validate_measure(ctx, host.settings().with_stddev).status;
}

}  // namespace

StatusCode run_apex_app1(PerfHost& host, const BenchParams& params) {
  return run_relay_app(host, params, "APEX APP 1", false);
}

StatusCode run_apex_app2(PerfHost& host, const BenchParams& params) {
  return run_relay_app(host, params, "APEX APP 2", true);
}

// Producer partition checksums seeded blocks and ships a digest through a
// sampling port; consumer partition turns the payload into matrices and
// multiplies them. Each partition's periodic/sporadic pair is timed
// end to end per activation.
namespace {
constexpr std::uint64_t kWindow = 20000;
constexpr std::uint64_t kPeriod = 2 * kWindow;
constexpr std::uint64_t kRefresh = 2 * kPeriod;
constexpr std::size_t kPayload = 64;
}  // namespace

StatusCode run_apex_app3(PerfHost& host, const BenchParams& params) {
  const std::uint64_t iters = pick_iters(params, 100);

  MeasureContext ctx_a = host.declare_measure();
  MeasureContext ctx_b = host.declare_measure();
  host.initialize_measure(ctx_a, "SAMPLE APEX APP A");
  host.initialize_measure(ctx_b, "SAMPLE APEX APP B");

  StatusCode crc_rc = host.add_channel("app3_digest_out", "app3_digest_in");
  if (crc_rc != StatusCode::Ok) return crc_rc;

  struct Shared {
    Rng rng;
    std::array<std::uint8_t, kPayload> payload{};
    std::uint64_t sink = 0;
    explicit Shared(std::uint64_t seed) : rng(seed) {}
  };
  Shared shared(params.seed);

  auto producer = host.declare_partition("producer", [&host, &ctx_a, &shared,
                                                      iters] {
    auto sem = host.create_semaphore("ship", 0, 4);
    auto port = host.create_sampling_port("app3_digest_out", kPayload,
                                          PortDirection::Source, kRefresh);
    if (!sem.ok() || !port.ok()) return;
    const ObjectId ship = sem.value;
    const ObjectId out = port.value;

    TaskSpec gen;
    gen.name = "generator";
    gen.priority = 20;
    gen.period_ticks = kPeriod;
    gen.entry = [&host, &ctx_a, &shared, ship, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.wait_on(WaitTarget::Period, 0, kInfiniteTime);
        host.start_measure(ctx_a);
        const std::vector<std::uint8_t> block = random_block(shared.rng, 1024);
        const std::uint32_t digest = crc32(block);
        for (int i = 0; i < 4; ++i)
          shared.payload[i] = static_cast<std::uint8_t>(digest >> (8 * i));
        for (std::size_t i = 4; i < shared.payload.size(); ++i)
          shared.payload[i] = block[i - 4];
        host.signal_semaphore(ship);
      }
    };
    host.create_task(gen);

    TaskSpec tx;
    tx.name = "transmitter";
    tx.priority = 10;
    tx.entry = [&host, &ctx_a, &shared, ship, out, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.wait_semaphore(ship, kInfiniteTime);
        host.write_sampling_message(out, shared.payload);
        host.end_measure(ctx_a);
      }
    };
    host.create_task(tx);
  });
  if (!producer.ok()) return producer.status;

  auto consumer = host.declare_partition("consumer", [&host, &ctx_b, &shared,
                                                      iters] {
    auto sem = host.create_semaphore("done", 0, 4);
    auto port = host.create_sampling_port("app3_digest_in", kPayload,
                                          PortDirection::Destination, kRefresh);
    if (!sem.ok() || !port.ok()) return;
    const ObjectId done = sem.value;
    const ObjectId in = port.value;

    TaskSpec mul;
    mul.name = "multiplier";
    mul.priority = 20;
    mul.period_ticks = kPeriod;
    mul.entry = [&host, &ctx_b, &shared, done, in, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.wait_on(WaitTarget::Period, 0, kInfiniteTime);
        host.start_measure(ctx_b);
        auto r = host.read_sampling_message(in);
        Matrix a{8, std::vector<std::int64_t>(64)};
        Matrix b{8, std::vector<std::int64_t>(64)};
        if (r.ok() && r.value.message.size() == kPayload) {
          for (std::size_t i = 0; i < 64; ++i) {
            a.cells[i] = static_cast<std::int64_t>(r.value.message[i]) - 128;
            b.cells[i] =
                static_cast<std::int64_t>(r.value.message[63 - i]) - 128;
          }
        }
        auto prod = matrix_multiply(a, b);
        if (prod.ok()) shared.sink += static_cast<std::uint64_t>(prod.value.at(0, 0));
        host.signal_semaphore(done);
      }
    };
    host.create_task(mul);

    TaskSpec ack;
    ack.name = "collector";
    ack.priority = 10;
    ack.entry = [&host, &ctx_b, &shared, done, iters] {
      for (std::uint64_t it = 0; it < iters; ++it) {
        host.wait_semaphore(done, kInfiniteTime);
        shared.sink += 1;
        host.end_measure(ctx_b);
      }
    };
    host.create_task(ack);
  });
  if (!consumer.ok()) return consumer.status;

  StatusCode wrc = host.add_window(producer.value, 0, kWindow);
  if (wrc != StatusCode::Ok) return wrc;
  wrc = host.add_window(consumer.value, kWindow, kWindow);
  if (wrc != StatusCode::Ok) return wrc;

  StatusCode rc = host.run(RunBounds::quiescent());
  if (rc != StatusCode::Ok) return rc;

  auto ra = host.validate_measure(ctx_a, host.settings().with_stddev);
  if (!ra.ok()) return ra.status;
  return host.validate_measure(ctx_b, host.settings().with_stddev).status;
}

}  // namespace sfp
