#pragma once

#include <string>
#include <vector>

#include "sfpbench/porting.hpp"
#include "sfpbench/timebase.hpp"

namespace sfp {

enum class ReportFormat : std::uint8_t { Table, Csv, Json };

// One result line: raw stats plus the display cells derived from them. The
// tick columns stay integral; the microsecond cells come from the exact
// truncating converters, never from floats.
struct ReportRow {
  std::string name;    // series name, as printed
  std::string source;  // application that produced it
  SummaryStats stats;

  std::string bcet_ticks_cell;
  std::string wcet_ticks_cell;
  std::string avg_ticks_cell;
  std::string bcet_us_cell;
  std::string wcet_us_cell;
  std::string avg_us_cell;
  std::string stddev_us_cell;
};

ReportRow make_report_row(std::string source, const MetricRecord& rec,
                          const TickRate& rate);

std::string emit_table(const std::vector<ReportRow>& rows);
std::string emit_csv(const std::vector<ReportRow>& rows);
std::string emit_json(const std::vector<ReportRow>& rows);
std::string emit(const std::vector<ReportRow>& rows, ReportFormat format);

}  // namespace sfp
