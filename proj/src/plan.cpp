#include "sfpbench/plan.hpp"

#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sfpbench/config.hpp"

namespace sfp {
namespace {

std::string valid_names() {
  std::string out;
  for (const auto& d : bench_registry()) {
    if (!out.empty()) out += ", ";
    out += d.name;
  }
  return out;
}

}  // namespace

PlanOutcome parse_cli(const std::vector<std::string>& args) {
  PlanOutcome outcome;

  std::string group;
  std::vector<std::string> bench_names;
  std::string clock = "virtual";
  std::string rate_text;
  std::string format = "table";
  std::string config_path;
  std::uint64_t iters = 0;
  std::uint64_t seed = 1;
  bool seed_given = false;

  CLI::App app{"Partitioned-executive benchmark runner"};
  app.add_option("--group", group, "Run one group: grey, apex or complete")
      ->check(CLI::IsMember({"grey", "apex", "complete"}));
  app.add_option("--bench", bench_names, "Run specific benchmarks by name");
  app.add_option("--clock", clock, "Clock source")
      ->check(CLI::IsMember({"virtual", "host"}));
  app.add_option("--ticks-per-us", rate_text,
                 "Tick rate, e.g. 75, 12.5 or 25/2");
  app.add_option("--iters", iters, "Iteration count override")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--config", config_path, "System configuration file");
  app.add_option("--trace", outcome.plan.trace_path,
                 "Write the scheduling trace of each run to this file");
  auto* seed_opt = app.add_option("--seed", seed, "Dataset and payload seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    outcome.proceed = false;
    outcome.exit_code = 0;
    outcome.message = app.help();
    return outcome;
  } catch (const CLI::ParseError& e) {
    outcome.proceed = false;
    outcome.exit_code = kExitUsage;
    outcome.message = std::string(e.what()) + "\nRun with --help for usage.\n";
    return outcome;
  }
  seed_given = seed_opt->count() > 0;

  // The config file supplies defaults for the cost table, tick rate, clock
  // and seed; explicit flags override it. Topology directives in the file
  // are ignored here since every benchmark declares its own layout.
  if (!config_path.empty()) {
    SystemConfig cfg;
    std::string error;
    StatusCode rc = load_config_file(config_path, &cfg, &error);
    if (rc != StatusCode::Ok) {
      outcome.proceed = false;
      outcome.exit_code = kExitConfig;
      outcome.message = "config: " + error + "\n";
      return outcome;
    }
    outcome.plan.settings.costs = cfg.costs;
    outcome.plan.settings.rate = cfg.tick_rate;
    outcome.plan.settings.clock = cfg.clock;
    outcome.plan.settings.seed = cfg.seed;
  }

  if (app.count("--clock") > 0 || config_path.empty())
    outcome.plan.settings.clock =
        clock == "host" ? ClockMode::Host : ClockMode::Virtual;
  if (seed_given || config_path.empty()) outcome.plan.settings.seed = seed;

  if (!rate_text.empty()) {
    auto rate = TickRate::parse(rate_text);
    if (!rate.ok()) {
      outcome.proceed = false;
      outcome.exit_code = kExitUsage;
      outcome.message =
          "--ticks-per-us: cannot parse '" + rate_text + "'\n";
      return outcome;
    }
    outcome.plan.settings.rate = rate.value;
  }

  outcome.plan.iters = iters;
  if (format == "csv")
    outcome.plan.format = ReportFormat::Csv;
  else if (format == "json")
    outcome.plan.format = ReportFormat::Json;
  else
    outcome.plan.format = ReportFormat::Table;

  if (!bench_names.empty()) {
    for (const auto& name : bench_names) {
      const BenchDescriptor* d = find_bench(name);
      if (d == nullptr) {
        outcome.proceed = false;
        outcome.exit_code = kExitUsage;
        outcome.message =
            "unknown benchmark '" + name + "'; valid names: " + valid_names() +
            "\n";
        return outcome;
      }
    }
    // Selection keeps catalog order regardless of flag order.
    for (const auto& d : bench_registry())
      for (const auto& name : bench_names)
        if (d.name == name) {
          outcome.plan.benches.push_back(&d);
          break;
        }
  } else if (!group.empty()) {
    BenchGroup want = group == "grey"  ? BenchGroup::GreyBox
                      : group == "apex" ? BenchGroup::Apex
                                        : BenchGroup::Complete;
    for (const auto& d : bench_registry())
      if (d.group == want) outcome.plan.benches.push_back(&d);
  } else {
    for (const auto& d : bench_registry())
      outcome.plan.benches.push_back(&d);
  }

  return outcome;
}

}  // namespace sfp
