#pragma once

#include <string>
#include <vector>

#include "sfpbench/plan.hpp"

namespace sfp {

struct ExecuteResult {
  std::vector<ReportRow> rows;  // catalog order
  StatusCode status = StatusCode::Ok;
  std::string failed_bench;  // set when status != Ok
  std::string trace_text;    // populated when the plan asked for a trace
};

// Runs each selected benchmark on a fresh executive instance, sequentially.
// Stops at the first failure so a broken run never emits a partial report.
ExecuteResult execute_plan(const RunPlan& plan);

}  // namespace sfp
