#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sfpbench/status.hpp"

namespace sfp {

// Ticks-per-microsecond as an exact rational, so rates like 12.5 lose
// nothing. All display conversion goes through integer arithmetic; floats
// never touch a value that ends up printed with tick provenance.
struct TickRate {
  std::uint64_t num = 75;  // ticks_per_us = num / den
  std::uint64_t den = 1;

  // Accepts "75", "12.5", "25/2". Decimal forms are converted exactly.
  static Result<TickRate> parse(std::string_view text);

  double ticks_to_micros(double ticks) const {
    return ticks * static_cast<double>(den) / static_cast<double>(num);
  }
};

// Truncates (never rounds) to two decimals: 1290 ticks at 75/1 -> "17.20".
std::string ticks_to_micros_display(std::uint64_t ticks, const TickRate& rate);

// Same truncation applied to an exact mean sum/count, avoiding the float
// detour entirely for averages of integer tick samples.
std::string mean_ticks_to_micros_display(std::uint64_t sum, std::uint64_t count,
                                         const TickRate& rate);

// Truncating two-decimal rendering of a raw tick mean (sum/count).
std::string mean_ticks_display(std::uint64_t sum, std::uint64_t count);

// Truncating two-decimal rendering of an already-float quantity (stddev).
std::string trunc2_display(double value);

struct SummaryStats {
  std::uint64_t count = 0;
  std::uint64_t bcet_ticks = 0;  // series minimum
  std::uint64_t wcet_ticks = 0;  // series maximum
  std::uint64_t sum_ticks = 0;
  double avg_ticks = 0.0;
  double bcet_us = 0.0;
  double wcet_us = 0.0;
  double avg_us = 0.0;
  double stddev_us = 0.0;  // population, over the microsecond samples
  bool has_stddev = false;
};

// Population standard deviation (divide by N), taken over the samples after
// conversion to microseconds. Empty input is an error, never a row of zeros.
Result<SummaryStats> summarize(std::span<const std::uint64_t> samples,
                               const TickRate& rate, bool with_stddev);

// One named series of raw tick samples, as produced by a measurement
// context after validation.
struct NamedSeries {
  std::string name;
  std::vector<std::uint64_t> samples;
};

}  // namespace sfp
