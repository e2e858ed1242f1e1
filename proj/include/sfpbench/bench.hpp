#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sfpbench/porting.hpp"

namespace sfp {

enum class BenchGroup : std::uint8_t { GreyBox, Apex, Complete };

const char* to_string(BenchGroup g);

struct BenchParams {
  std::uint64_t iters = 0;  // 0: use the descriptor default
  std::uint64_t seed = 1;
};

// One registered application. run() declares partitions and tasks on the
// host, drives the run, and leaves its series in host.collected().
struct BenchDescriptor {
  std::string name;
  BenchGroup group = BenchGroup::GreyBox;
  std::uint64_t default_iters = 1000;
  StatusCode (*run)(PerfHost& host, const BenchParams& params) = nullptr;
};

// The 18 applications, in catalog order.
const std::vector<BenchDescriptor>& bench_registry();
const BenchDescriptor* find_bench(std::string_view name);

// Grey-box applications
StatusCode run_process_switch(PerfHost& host, const BenchParams& params);
StatusCode run_mutex_acquire_release(PerfHost& host, const BenchParams& params);
StatusCode run_mutex_acquire_loop(PerfHost& host, const BenchParams& params);
StatusCode run_mutex_release_loop(PerfHost& host, const BenchParams& params);
StatusCode run_mutex_workload(PerfHost& host, const BenchParams& params);
StatusCode run_sem_wait_signal(PerfHost& host, const BenchParams& params);
StatusCode run_priority_sem(PerfHost& host, const BenchParams& params);
StatusCode run_sem_signal_loop(PerfHost& host, const BenchParams& params);
StatusCode run_sem_wait_loop(PerfHost& host, const BenchParams& params);
StatusCode run_sem_workload(PerfHost& host, const BenchParams& params);
StatusCode run_partition_switch(PerfHost& host, const BenchParams& params);

// APEX call latency application
StatusCode run_apex_latency(PerfHost& host, const BenchParams& params);
// The calls the latency application covers, in report order.
const std::vector<std::string>& apex_latency_calls();

// Complete applications
StatusCode run_sobel_app(PerfHost& host, const BenchParams& params);
StatusCode run_adpcm_app(PerfHost& host, const BenchParams& params);
StatusCode run_dijkstra_app(PerfHost& host, const BenchParams& params);
StatusCode run_apex_app1(PerfHost& host, const BenchParams& params);
StatusCode run_apex_app2(PerfHost& host, const BenchParams& params);
StatusCode run_apex_app3(PerfHost& host, const BenchParams& params);

}  // namespace sfp
