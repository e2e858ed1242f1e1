#include "sfpbench/execute.hpp"

#include "sfpbench/porting.hpp"

namespace sfp {

ExecuteResult execute_plan(const RunPlan& plan) {
  ExecuteResult result;
  const bool want_trace = !plan.trace_path.empty();

  for (const BenchDescriptor* d : plan.benches) {
    ApexHost host(plan.settings);
    if (want_trace) host.enable_trace();

    BenchParams params;
    params.iters = plan.iters != 0 ? plan.iters : d->default_iters;
    params.seed = plan.settings.seed;

    StatusCode rc = d->run(host, params);
    if (rc != StatusCode::Ok) {
      result.status = rc;
      result.failed_bench = d->name;
      return result;
    }

    for (const auto& rec : host.collected())
      result.rows.push_back(make_report_row(d->name, rec, plan.settings.rate));

    if (want_trace) {
      result.trace_text += "# " + d->name + "\n";
      result.trace_text += host.render_trace();
    }
  }
  return result;
}

}  // namespace sfp
