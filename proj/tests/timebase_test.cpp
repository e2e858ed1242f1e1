#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sfpbench/timebase.hpp"

using namespace sfp;

namespace {

// Reference truncation done symbolically: micros = ticks*den/num, so the
// hundredths digit string is floor(ticks*den*100/num) rendered base 10.
std::string brute_display(std::uint64_t ticks, std::uint64_t num, std::uint64_t den) {
  const unsigned __int128 cents =
      static_cast<unsigned __int128>(ticks) * den * 100 / num;
  const auto whole = static_cast<std::uint64_t>(cents / 100);
  const auto frac = static_cast<unsigned>(cents % 100);
  std::string out = std::to_string(whole);
  out += '.';
  out += static_cast<char>('0' + frac / 10);
  out += static_cast<char>('0' + frac % 10);
  return out;
}

}  // namespace

TEST_CASE("tick rate parses integers, decimals and fractions exactly") {
  auto r = TickRate::parse("75");
  REQUIRE(r.ok());
  CHECK(r.value.num == 75);
  CHECK(r.value.den == 1);

  r = TickRate::parse("12.5");
  REQUIRE(r.ok());
  CHECK(r.value.num * 2 == r.value.den * 25);

  r = TickRate::parse("25/2");
  REQUIRE(r.ok());
  CHECK(r.value.num * 2 == r.value.den * 25);

  CHECK_FALSE(TickRate::parse("0").ok());
  CHECK_FALSE(TickRate::parse("").ok());
  CHECK_FALSE(TickRate::parse("abc").ok());
  CHECK_FALSE(TickRate::parse("75/0").ok());
  CHECK_FALSE(TickRate::parse("-3").ok());
}

TEST_CASE("display conversion truncates toward zero, never rounds") {
  const TickRate at75{75, 1};
  CHECK(ticks_to_micros_display(29, at75) == "0.38");   // 0.38666..
  CHECK(ticks_to_micros_display(44, at75) == "0.58");   // 0.58666..
  CHECK(ticks_to_micros_display(113, at75) == "1.50");  // 1.50666..
  CHECK(ticks_to_micros_display(75, at75) == "1.00");
  CHECK(ticks_to_micros_display(0, at75) == "0.00");
  CHECK(ticks_to_micros_display(1290, at75) == "17.20");
  CHECK(ticks_to_micros_display(3056, at75) == "40.74");  // 40.7466..
}

TEST_CASE("display conversion handles non-integer and fractional rates") {
  const TickRate half{25, 2};  // 12.5 ticks per us
  CHECK(ticks_to_micros_display(25, half) == "2.00");
  CHECK(ticks_to_micros_display(1, half) == "0.08");
  CHECK(ticks_to_micros_display(7, half) == "0.56");

  const TickRate unit{1, 1};
  CHECK(ticks_to_micros_display(1234, unit) == "1234.00");
}

TEST_CASE("display conversion matches symbolic truncation on random inputs") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint64_t> tick_dist(0, 1ull << 32);
  std::uniform_int_distribution<std::uint64_t> num_dist(1, 400);
  std::uniform_int_distribution<std::uint64_t> den_dist(1, 16);
  for (int i = 0; i < 5000; ++i) {
    const TickRate rate{num_dist(rng), den_dist(rng)};
    const std::uint64_t t = tick_dist(rng);
    CHECK(ticks_to_micros_display(t, rate) == brute_display(t, rate.num, rate.den));
  }
}

TEST_CASE("mean displays derive from exact sums, not rounded intermediates") {
  const TickRate at75{75, 1};
  // 1682 + 1682 + 1683 = 5047 over 3: mean 1682.333.. -> "1682.33";
  // in us: 5047/(3*75) = 22.4311.. -> "22.43".
  CHECK(mean_ticks_display(5047, 3) == "1682.33");
  CHECK(mean_ticks_to_micros_display(5047, 3, at75) == "22.43");
  CHECK(mean_ticks_display(10, 4) == "2.50");
  CHECK(mean_ticks_to_micros_display(1682, 1, at75) == "22.42");  // 22.4266..
  // Mean 2795.75 ticks -> 37.2766.. us: truncation keeps "37.27" even
  // though the tick mean rounds up to 2796.
  CHECK(mean_ticks_display(11183, 4) == "2795.75");
  CHECK(mean_ticks_to_micros_display(11183, 4, at75) == "37.27");
}

TEST_CASE("trunc2_display cuts float quantities at two decimals") {
  CHECK(trunc2_display(0.0) == "0.00");
  CHECK(trunc2_display(1.999) == "1.99");
  CHECK(trunc2_display(0.04897) == "0.04");
  CHECK(trunc2_display(123.456) == "123.45");
}

TEST_CASE("summarize rejects an empty series") {
  const TickRate at75{75, 1};
  auto r = summarize({}, at75, true);
  CHECK_FALSE(r.ok());
  CHECK(r.status == StatusCode::EmptySeries);
}

TEST_CASE("summarize on a constant series gives zero spread") {
  const TickRate at75{75, 1};
  const std::vector<std::uint64_t> flat(100, 113);
  auto r = summarize(flat, at75, true);
  REQUIRE(r.ok());
  CHECK(r.value.count == 100);
  CHECK(r.value.bcet_ticks == 113);
  CHECK(r.value.wcet_ticks == 113);
  CHECK(r.value.sum_ticks == 11300);
  CHECK(r.value.avg_ticks == doctest::Approx(113.0).epsilon(1e-14));
  CHECK(r.value.stddev_us == 0.0);
  CHECK(r.value.has_stddev);
}

TEST_CASE("summarize can skip the deviation pass") {
  const TickRate at75{75, 1};
  const std::vector<std::uint64_t> s{1, 2, 3};
  auto r = summarize(s, at75, false);
  REQUIRE(r.ok());
  CHECK_FALSE(r.value.has_stddev);
  CHECK(r.value.stddev_us == 0.0);
}

TEST_CASE("summarize matches a brute-force oracle on random series") {
  // Oracle recomputes everything with exact integer accumulators where
  // possible: min/max/sum exactly, mean and population stddev through
  // long double from the exact sums.
  std::mt19937_64 rng(20260818);
  std::uniform_int_distribution<std::size_t> len_dist(1, 10000);
  std::uniform_int_distribution<std::uint64_t> val_dist(0, 1ull << 32);
  std::uniform_int_distribution<std::uint64_t> num_dist(1, 200);
  std::uniform_int_distribution<std::uint64_t> den_dist(1, 16);

  for (int series = 0; series < 1000; ++series) {
    const std::size_t n = len_dist(rng);
    std::vector<std::uint64_t> xs(n);
    for (auto& x : xs) x = val_dist(rng);
    const TickRate rate{num_dist(rng), den_dist(rng)};

    auto r = summarize(xs, rate, true);
    REQUIRE(r.ok());
    const auto& got = r.value;

    const std::uint64_t mn = *std::min_element(xs.begin(), xs.end());
    const std::uint64_t mx = *std::max_element(xs.begin(), xs.end());
    unsigned __int128 sum = 0;
    for (auto x : xs) sum += x;
    CHECK(got.count == n);
    CHECK(got.bcet_ticks == mn);
    CHECK(got.wcet_ticks == mx);
    CHECK(got.sum_ticks == static_cast<std::uint64_t>(sum));

    const long double mean_ticks =
        static_cast<long double>(static_cast<std::uint64_t>(sum)) / n;
    const long double to_us = static_cast<long double>(rate.den) / rate.num;
    const long double mean_us = mean_ticks * to_us;
    long double acc = 0.0L;
    for (auto x : xs) {
      const long double d = static_cast<long double>(x) * to_us - mean_us;
      acc += d * d;
    }
    const long double dev_us = std::sqrt(acc / n);

    const auto rel = [](long double want, double have) {
      const long double denom = std::max<long double>(std::fabs(want), 1.0L);
      return std::fabs(static_cast<long double>(have) - want) / denom;
    };
    CHECK(rel(mean_ticks, got.avg_ticks) <= 1e-12);
    CHECK(rel(mean_us, got.avg_us) <= 1e-12);
    CHECK(rel(static_cast<long double>(mn) * to_us, got.bcet_us) <= 1e-12);
    CHECK(rel(static_cast<long double>(mx) * to_us, got.wcet_us) <= 1e-12);
    CHECK(rel(dev_us, got.stddev_us) <= 1e-9);
  }
}
