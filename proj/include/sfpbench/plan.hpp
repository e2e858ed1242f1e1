#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sfpbench/bench.hpp"
#include "sfpbench/report.hpp"

namespace sfp {

struct RunPlan {
  std::vector<const BenchDescriptor*> benches;  // catalog order
  RunSettings settings;
  std::uint64_t iters = 0;  // 0: per-bench default
  ReportFormat format = ReportFormat::Table;
  std::string trace_path;  // empty: no trace export
};

// proceed=false means the run should not happen: either help was requested
// (exit_code 0) or parsing failed (exit_code set accordingly).
struct PlanOutcome {
  RunPlan plan;
  bool proceed = true;
  int exit_code = 0;
  std::string message;
};

// Exit codes: 0 success, 2 usage, 3 bad config file, 4 benchmark abort.
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitBenchAbort = 4;

PlanOutcome parse_cli(const std::vector<std::string>& args);

}  // namespace sfp
