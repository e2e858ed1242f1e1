#include <string_view>
#include <vector>

#include "sfpbench/bench.hpp"

namespace sfp {

const char* to_string(BenchGroup g) {
  switch (g) {
    case BenchGroup::GreyBox:
      return "grey";
    case BenchGroup::Apex:
      return "apex";
    case BenchGroup::Complete:
      return "complete";
  }
  return "?";
}

const std::vector<BenchDescriptor>& bench_registry() {
  static const std::vector<BenchDescriptor> regs = {
      {"Process Switch", BenchGroup::GreyBox, 1000, &run_process_switch},
      {"Mutex Acquire/Release", BenchGroup::GreyBox, 1000, &run_mutex_acquire_release},
      {"Mutex Acquire 2", BenchGroup::GreyBox, 1000, &run_mutex_acquire_loop},
      {"Mutex Release 2", BenchGroup::GreyBox, 1000, &run_mutex_release_loop},
      {"Mutex Workload", BenchGroup::GreyBox, 1000, &run_mutex_workload},
      {"Sem Wait/Signal", BenchGroup::GreyBox, 1000, &run_sem_wait_signal},
      {"Priority Sem", BenchGroup::GreyBox, 1000, &run_priority_sem},
      {"Sem Signal 2", BenchGroup::GreyBox, 1000, &run_sem_signal_loop},
      {"Sem Wait 2", BenchGroup::GreyBox, 1000, &run_sem_wait_loop},
      {"Sem Workload", BenchGroup::GreyBox, 1000, &run_sem_workload},
      {"Partition Switch", BenchGroup::GreyBox, 1000, &run_partition_switch},
      {"APEX Calls", BenchGroup::Apex, 1000, &run_apex_latency},
      {"SOBEL", BenchGroup::Complete, 100, &run_sobel_app},
      {"ADPCM", BenchGroup::Complete, 100, &run_adpcm_app},
      {"DIJKSTRA", BenchGroup::Complete, 100, &run_dijkstra_app},
      {"APEX APP 1", BenchGroup::Complete, 100, &run_apex_app1},
      {"APEX APP 2", BenchGroup::Complete, 100, &run_apex_app2},
      {"APEX APP 3", BenchGroup::Complete, 100, &run_apex_app3},
  };
  return regs;
}

const BenchDescriptor* find_bench(std::string_view name) {
  for (const auto& d : bench_registry())
    if (d.name == name) return &d;
  return nullptr;
}

}  // namespace sfp
