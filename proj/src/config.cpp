#include "sfpbench/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace sfp {
namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool to_u64(const std::string& s, std::uint64_t* out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc{} && p == s.data() + s.size();
}

std::string at_line(std::size_t line_no, const std::string& msg) {
  return "line " + std::to_string(line_no) + ": " + msg;
}

}  // namespace

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::DeadlineMiss: return "DEADLINE_MISS";
    case ErrorCode::ApplicationError: return "APPLICATION_ERROR";
    case ErrorCode::NumericError: return "NUMERIC_ERROR";
    case ErrorCode::StackOverflow: return "STACK_OVERFLOW";
    case ErrorCode::IllegalRequest: return "ILLEGAL_REQUEST";
  }
  return "UNKNOWN";
}

const char* to_string(HealthAction a) {
  switch (a) {
    case HealthAction::Ignore: return "IGNORE";
    case HealthAction::RestartProcess: return "RESTART_PROCESS";
    case HealthAction::RestartPartition: return "RESTART_PARTITION";
    case HealthAction::StopPartition: return "STOP_PARTITION";
  }
  return "UNKNOWN";
}

bool parse_error_code(std::string_view s, ErrorCode* out) {
  for (std::size_t i = 0; i < kErrorCodeCount; ++i) {
    auto c = static_cast<ErrorCode>(i);
    if (s == to_string(c)) {
      *out = c;
      return true;
    }
  }
  return false;
}

bool parse_health_action(std::string_view s, HealthAction* out) {
  for (int i = 0; i <= static_cast<int>(HealthAction::StopPartition); ++i) {
    auto a = static_cast<HealthAction>(i);
    if (s == to_string(a)) {
      *out = a;
      return true;
    }
  }
  return false;
}

std::int32_t SystemConfig::partition_index(std::string_view name) const {
  for (std::size_t i = 0; i < partitions.size(); ++i)
    if (partitions[i].name == name) return static_cast<std::int32_t>(i);
  return -1;
}

StatusCode SystemConfig::validate(std::string* error) {
  auto fail = [&](const std::string& msg) {
    if (error) *error = msg;
    return StatusCode::ConfigInvalid;
  };

  if (major_frame_ticks == 0) return fail("major_frame must be positive");
  if (tick_rate.num == 0 || tick_rate.den == 0) return fail("ticks_per_us must be positive");
  if (clock == ClockMode::Virtual && costs.default_cost == 0)
    return fail("cost_default must be positive with the virtual clock");
  if (max_processes_per_partition == 0 ||
      max_processes_per_partition > kProcessCapCeilingConfig)
    return fail("max_processes_per_partition out of range");

  for (std::size_t i = 0; i < partitions.size(); ++i) {
    if (partitions[i].name.empty()) return fail("partition name empty");
    if (partitions[i].memory_quota == 0)
      return fail("partition '" + partitions[i].name + "' has zero memory quota");
    for (std::size_t j = i + 1; j < partitions.size(); ++j)
      if (partitions[i].name == partitions[j].name)
        return fail("duplicate partition name '" + partitions[i].name + "'");
  }

  // A config with no topology at all is a legitimate settings-only file
  // (cost table, tick rate, clock); the kernel separately refuses to boot
  // without partitions. Declared partitions do require windows.
  if (!partitions.empty() && windows.empty())
    return fail("no schedule windows declared");
  for (const auto& w : windows) {
    if (w.partition < 0 || static_cast<std::size_t>(w.partition) >= partitions.size())
      return fail("window references unknown partition");
    if (w.duration == 0) return fail("window duration must be positive");
    if (w.offset + w.duration > major_frame_ticks ||
        w.offset + w.duration < w.offset)
      return fail("window exceeds the major frame");
  }
  std::stable_sort(windows.begin(), windows.end(),
                   [](const ScheduleWindow& a, const ScheduleWindow& b) {
                     return a.offset < b.offset;
                   });
  for (std::size_t i = 1; i < windows.size(); ++i)
    if (windows[i - 1].offset + windows[i - 1].duration > windows[i].offset)
      return fail("windows overlap at offset " + std::to_string(windows[i].offset));

  std::vector<bool> scheduled(partitions.size(), false);
  for (const auto& w : windows) scheduled[w.partition] = true;
  for (std::size_t i = 0; i < partitions.size(); ++i)
    if (!scheduled[i])
      return fail("partition '" + partitions[i].name + "' has no window");

  for (std::size_t i = 0; i < channels.size(); ++i) {
    const auto& c = channels[i];
    if (c.source_port.empty() || c.dest_port.empty())
      return fail("channel with empty port name");
    if (c.source_port == c.dest_port)
      return fail("channel source equals destination '" + c.source_port + "'");
    for (std::size_t j = i + 1; j < channels.size(); ++j)
      if (channels[j].source_port == c.source_port)
        return fail("source port '" + c.source_port + "' bound twice");
  }
  return StatusCode::Ok;
}

StatusCode parse_config_text(std::string_view text, SystemConfig* out,
                             std::string* error) {
  auto fail = [&](std::size_t line_no, const std::string& msg) {
    if (error) *error = at_line(line_no, msg);
    return StatusCode::ConfigInvalid;
  };

  SystemConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto tok = split_ws(raw);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    auto argc = tok.size() - 1;

    auto want = [&](std::size_t n) { return argc == n; };
    std::uint64_t v = 0;

    if (key == "clock") {
      if (!want(1)) return fail(line_no, "clock expects virtual|host");
      if (tok[1] == "virtual") cfg.clock = ClockMode::Virtual;
      else if (tok[1] == "host") cfg.clock = ClockMode::Host;
      else return fail(line_no, "clock expects virtual|host");
    } else if (key == "ticks_per_us") {
      if (!want(1)) return fail(line_no, "ticks_per_us expects one value");
      auto r = TickRate::parse(tok[1]);
      if (!r.ok()) return fail(line_no, "bad ticks_per_us '" + tok[1] + "'");
      cfg.tick_rate = r.value;
    } else if (key == "cost_default") {
      if (!want(1) || !to_u64(tok[1], &v)) return fail(line_no, "cost_default expects a tick count");
      cfg.costs.default_cost = v;
    } else if (key == "cost") {
      if (!want(2) || !to_u64(tok[2], &v)) return fail(line_no, "cost expects <OP_NAME> <ticks>");
      cfg.costs.entries[tok[1]] = v;
    } else if (key == "process_switch_cost") {
      if (!want(1) || !to_u64(tok[1], &v)) return fail(line_no, "process_switch_cost expects a tick count");
      cfg.costs.process_switch = v;
    } else if (key == "partition_switch_cost") {
      if (!want(1) || !to_u64(tok[1], &v)) return fail(line_no, "partition_switch_cost expects a tick count");
      cfg.costs.partition_switch = v;
    } else if (key == "major_frame") {
      if (!want(1) || !to_u64(tok[1], &v)) return fail(line_no, "major_frame expects a tick count");
      cfg.major_frame_ticks = v;
    } else if (key == "partition") {
      if (argc < 1 || argc > 2) return fail(line_no, "partition expects <name> [memory_quota]");
      PartitionConfig p;
      p.name = tok[1];
      if (argc == 2) {
        if (!to_u64(tok[2], &v) || v == 0) return fail(line_no, "bad memory quota");
        p.memory_quota = v;
      }
      cfg.partitions.push_back(std::move(p));
    } else if (key == "window") {
      if (!want(3)) return fail(line_no, "window expects <partition> <offset> <duration>");
      ScheduleWindow w;
      w.partition = cfg.partition_index(tok[1]);
      if (w.partition < 0) return fail(line_no, "unknown partition '" + tok[1] + "'");
      if (!to_u64(tok[2], &w.offset) || !to_u64(tok[3], &w.duration))
        return fail(line_no, "bad window offset/duration");
      cfg.windows.push_back(w);
    } else if (key == "channel") {
      if (!want(2)) return fail(line_no, "channel expects <source_port> <dest_port>");
      cfg.channels.push_back({tok[1], tok[2]});
    } else if (key == "hm") {
      if (!want(2)) return fail(line_no, "hm expects <ERROR_CODE> <ACTION>");
      ErrorCode code;
      HealthAction action;
      if (!parse_error_code(tok[1], &code)) return fail(line_no, "unknown error code '" + tok[1] + "'");
      if (!parse_health_action(tok[2], &action)) return fail(line_no, "unknown action '" + tok[2] + "'");
      cfg.hm.set(code, action);
    } else if (key == "max_processes_per_partition") {
      if (!want(1) || !to_u64(tok[1], &v)) return fail(line_no, "expects a count");
      cfg.max_processes_per_partition = static_cast<std::uint32_t>(v);
    } else if (key == "runtime_process_creation") {
      if (!want(1) || (tok[1] != "on" && tok[1] != "off"))
        return fail(line_no, "runtime_process_creation expects on|off");
      cfg.runtime_process_creation = tok[1] == "on";
    } else if (key == "seed") {
      if (!want(1) || !to_u64(tok[1], &v)) return fail(line_no, "seed expects a number");
      cfg.seed = v;
    } else {
      return fail(line_no, "unknown directive '" + key + "'");
    }
  }

  std::string verr;
  if (cfg.validate(&verr) != StatusCode::Ok) {
    if (error) *error = verr;
    return StatusCode::ConfigInvalid;
  }
  *out = std::move(cfg);
  return StatusCode::Ok;
}

StatusCode load_config_file(const std::string& path, SystemConfig* out,
                            std::string* error) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (error) *error = "cannot open config file '" + path + "'";
    return StatusCode::ConfigInvalid;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  StatusCode st = parse_config_text(text, out, error);
  if (st != StatusCode::Ok && error) *error = path + ": " + *error;
  return st;
}

}  // namespace sfp
