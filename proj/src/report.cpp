#include "sfpbench/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

namespace sfp {
namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
  if (s.size() >= width) return s;
  return std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  if (s.size() >= width) return s;
  return s + std::string(width - s.size(), ' ');
}

std::string center(const std::string& s, std::size_t width) {
  if (s.size() >= width) return s;
  const std::size_t left = (width - s.size()) / 2;
  return std::string(left, ' ') + s + std::string(width - s.size() - left, ' ');
}

}  // namespace

ReportRow make_report_row(std::string source, const MetricRecord& rec,
                          const TickRate& rate) {
  ReportRow row;
  row.name = rec.series.name;
  row.source = std::move(source);
  row.stats = rec.stats;

  const SummaryStats& s = rec.stats;
  row.bcet_ticks_cell = std::to_string(s.bcet_ticks) + ".00";
  row.wcet_ticks_cell = std::to_string(s.wcet_ticks) + ".00";
  row.avg_ticks_cell = mean_ticks_display(s.sum_ticks, s.count);
  row.bcet_us_cell = ticks_to_micros_display(s.bcet_ticks, rate);
  row.wcet_us_cell = ticks_to_micros_display(s.wcet_ticks, rate);
  row.avg_us_cell = mean_ticks_to_micros_display(s.sum_ticks, s.count, rate);
  row.stddev_us_cell = s.has_stddev ? trunc2_display(s.stddev_us) : "-";
  return row;
}

std::string emit_table(const std::vector<ReportRow>& rows) {
  const char* headers[7] = {"BCET", "WCET",    "Average", "BCET",
                            "WCET", "Average", "STD Dev."};

  std::size_t name_w = std::string("Benchmark").size();
  std::size_t col_w[7];
  for (int c = 0; c < 7; ++c) col_w[c] = std::string(headers[c]).size();

  auto cells = [](const ReportRow& r) {
    return std::array<const std::string*, 7>{
        &r.bcet_ticks_cell, &r.wcet_ticks_cell, &r.avg_ticks_cell,
        &r.bcet_us_cell,    &r.wcet_us_cell,    &r.avg_us_cell,
        &r.stddev_us_cell};
  };

  for (const auto& r : rows) {
    name_w = std::max(name_w, r.name.size());
    auto cs = cells(r);
    for (int c = 0; c < 7; ++c) col_w[c] = std::max(col_w[c], cs[c]->size());
  }

  // Column blocks: one per unit, two spaces between columns inside a block.
  const std::size_t ticks_w = col_w[0] + col_w[1] + col_w[2] + 4;
  const std::size_t us_w = col_w[3] + col_w[4] + col_w[5] + col_w[6] + 6;

  std::string out;
  out += std::string(name_w, ' ');
  out += " | " + center("Time (ticks)", ticks_w);
  out += " | " + center("Time (us)", us_w);
  out += "\n";

  out += pad_right("Benchmark", name_w);
  out += " | " + pad_left(headers[0], col_w[0]) + "  " +
         pad_left(headers[1], col_w[1]) + "  " + pad_left(headers[2], col_w[2]);
  out += " | " + pad_left(headers[3], col_w[3]) + "  " +
         pad_left(headers[4], col_w[4]) + "  " + pad_left(headers[5], col_w[5]) +
         "  " + pad_left(headers[6], col_w[6]);
  out += "\n";

  out += std::string(name_w, '-') + "-+-" + std::string(ticks_w, '-') + "-+-" +
         std::string(us_w, '-') + "\n";

  for (const auto& r : rows) {
    auto cs = cells(r);
    out += pad_right(r.name, name_w);
    out += " | " + pad_left(*cs[0], col_w[0]) + "  " +
           pad_left(*cs[1], col_w[1]) + "  " + pad_left(*cs[2], col_w[2]);
    out += " | " + pad_left(*cs[3], col_w[3]) + "  " +
           pad_left(*cs[4], col_w[4]) + "  " + pad_left(*cs[5], col_w[5]) +
           "  " + pad_left(*cs[6], col_w[6]);
    out += "\n";
  }
  return out;
}

std::string emit_csv(const std::vector<ReportRow>& rows) {
  std::string out =
      "name,samples,bcet_ticks,wcet_ticks,avg_ticks,bcet_us,wcet_us,avg_us,"
      "stddev_us\n";
  for (const auto& r : rows) {
    const SummaryStats& s = r.stats;
    out += r.name;
    out += ',' + std::to_string(s.count);
    out += ',' + std::to_string(s.bcet_ticks);
    out += ',' + std::to_string(s.wcet_ticks);
    out += ',' + fixed6(s.avg_ticks);
    out += ',' + fixed6(s.bcet_us);
    out += ',' + fixed6(s.wcet_us);
    out += ',' + fixed6(s.avg_us);
    out += ',';
    if (s.has_stddev) out += fixed6(s.stddev_us);
    out += '\n';
  }
  return out;
}

std::string emit_json(const std::vector<ReportRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    const SummaryStats& s = r.stats;
    nlohmann::json obj;
    obj["name"] = r.name;
    obj["source"] = r.source;
    obj["samples"] = s.count;
    obj["bcet_ticks"] = s.bcet_ticks;
    obj["wcet_ticks"] = s.wcet_ticks;
    obj["sum_ticks"] = s.sum_ticks;
    obj["avg_ticks"] = s.avg_ticks;
    obj["bcet_us"] = s.bcet_us;
    obj["wcet_us"] = s.wcet_us;
    obj["avg_us"] = s.avg_us;
    if (s.has_stddev)
      obj["stddev_us"] = s.stddev_us;
    else
      obj["stddev_us"] = nullptr;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string emit(const std::vector<ReportRow>& rows, ReportFormat format) {
  switch (format) {
    case ReportFormat::Table:
      return emit_table(rows);
    case ReportFormat::Csv:
      return emit_csv(rows);
    case ReportFormat::Json:
      return emit_json(rows);
  }
  return {};
}

}  // namespace sfp
