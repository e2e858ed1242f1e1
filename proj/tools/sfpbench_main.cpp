#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sfpbench/execute.hpp"
#include "sfpbench/plan.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  sfp::PlanOutcome outcome = sfp::parse_cli(args);
  if (!outcome.proceed) {
    (outcome.exit_code == 0 ? std::cout : std::cerr) << outcome.message;
    return outcome.exit_code;
  }

  sfp::ExecuteResult result = sfp::execute_plan(outcome.plan);
  if (result.status != sfp::StatusCode::Ok) {
    std::cerr << "benchmark '" << result.failed_bench
              << "' aborted: " << sfp::to_string(result.status) << "\n";
    return sfp::kExitBenchAbort;
  }

  if (!outcome.plan.trace_path.empty()) {
    std::ofstream trace(outcome.plan.trace_path, std::ios::binary);
    if (!trace) {
      std::cerr << "cannot write trace file '" << outcome.plan.trace_path
                << "'\n";
      return sfp::kExitConfig;
    }
    trace << result.trace_text;
  }

  std::cout << sfp::emit(result.rows, outcome.plan.format);
  return 0;
}
