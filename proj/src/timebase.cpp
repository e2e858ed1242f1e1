#include "sfpbench/timebase.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace sfp {
namespace {

using U128 = unsigned __int128;

bool parse_u64(std::string_view s, std::uint64_t* out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc{} && p == s.data() + s.size();
}

std::string render_hundredths(U128 hundredths) {
  char buf[64];
  auto whole = static_cast<unsigned long long>(hundredths / 100);
  auto frac = static_cast<unsigned>(hundredths % 100);
  std::snprintf(buf, sizeof buf, "%llu.%02u", whole, frac);
  return buf;
}

double exact_ratio(U128 numer, U128 denom) {
  return static_cast<double>(static_cast<long double>(numer) /
                             static_cast<long double>(denom));
}

}  // namespace

Result<TickRate> TickRate::parse(std::string_view text) {
  using R = Result<TickRate>;
  if (text.empty()) return R::failure(StatusCode::ConfigInvalid);

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    TickRate r;
    if (!parse_u64(text.substr(0, slash), &r.num) ||
        !parse_u64(text.substr(slash + 1), &r.den) || r.num == 0 || r.den == 0)
      return R::failure(StatusCode::ConfigInvalid);
    std::uint64_t g = std::gcd(r.num, r.den);
    r.num /= g;
    r.den /= g;
    return R::success(r);
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 9) return R::failure(StatusCode::ConfigInvalid);
    std::uint64_t w = 0, f = 0;
    if ((!whole.empty() && !parse_u64(whole, &w)) || !parse_u64(frac, &f))
      return R::failure(StatusCode::ConfigInvalid);
    std::uint64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    TickRate r;
    r.num = w * scale + f;
    r.den = scale;
    if (r.num == 0) return R::failure(StatusCode::ConfigInvalid);
    std::uint64_t g = std::gcd(r.num, r.den);
    r.num /= g;
    r.den /= g;
    return R::success(r);
  }

  TickRate r;
  if (!parse_u64(text, &r.num) || r.num == 0)
    return R::failure(StatusCode::ConfigInvalid);
  r.den = 1;
  return R::success(r);
}

std::string ticks_to_micros_display(std::uint64_t ticks, const TickRate& rate) {
  U128 hundredths = (U128)ticks * rate.den * 100 / rate.num;
  return render_hundredths(hundredths);
}

std::string mean_ticks_to_micros_display(std::uint64_t sum, std::uint64_t count,
                                         const TickRate& rate) {
  if (count == 0) return "0.00";
  U128 hundredths = (U128)sum * rate.den * 100 / ((U128)rate.num * count);
  return render_hundredths(hundredths);
}

std::string mean_ticks_display(std::uint64_t sum, std::uint64_t count) {
  if (count == 0) return "0.00";
  U128 hundredths = (U128)sum * 100 / count;
  return render_hundredths(hundredths);
}

std::string trunc2_display(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) value = 0.0;
  auto hundredths = static_cast<U128>(std::floor(value * 100.0));
  return render_hundredths(hundredths);
}

Result<SummaryStats> summarize(std::span<const std::uint64_t> samples,
                               const TickRate& rate, bool with_stddev) {
  using R = Result<SummaryStats>;
  if (samples.empty()) return R::failure(StatusCode::EmptySeries);

  SummaryStats s;
  s.count = samples.size();
  s.bcet_ticks = samples[0];
  s.wcet_ticks = samples[0];
  U128 sum = 0;
  for (std::uint64_t v : samples) {
    if (v < s.bcet_ticks) s.bcet_ticks = v;
    if (v > s.wcet_ticks) s.wcet_ticks = v;
    sum += v;
  }
  s.sum_ticks = static_cast<std::uint64_t>(sum);
  s.avg_ticks = exact_ratio(sum, s.count);
  s.bcet_us = exact_ratio((U128)s.bcet_ticks * rate.den, rate.num);
  s.wcet_us = exact_ratio((U128)s.wcet_ticks * rate.den, rate.num);
  s.avg_us = exact_ratio(sum * rate.den, (U128)rate.num * s.count);

  if (with_stddev && s.count > 1) {
    // Population variance of the microsecond samples, kept exact for as long
    // as possible: with m = N*sum(x^2) - (sum x)^2 over ticks,
    //   stddev_us = sqrt(m) * den / (num * N).
    // N*sum(x^2) <= (N*max)^2, so everything fits in 128 bits whenever
    // N*max fits in 64; past that, fall back to a streaming float pass.
    bool exact_ok = (U128)s.count * s.wcet_ticks <= ~std::uint64_t{0};
    if (exact_ok) {
      U128 sq = 0;
      for (std::uint64_t v : samples) sq += (U128)v * v;
      U128 m = (U128)s.count * sq - sum * sum;
      long double root = sqrtl(static_cast<long double>(m));
      s.stddev_us = static_cast<double>(
          root * rate.den / (static_cast<long double>(rate.num) * s.count));
    } else {
      long double mean = static_cast<long double>(sum) / s.count;
      long double acc = 0.0L;
      for (std::uint64_t v : samples) {
        long double d = static_cast<long double>(v) - mean;
        acc += d * d;
      }
      long double root = sqrtl(acc / s.count);
      s.stddev_us = static_cast<double>(root * rate.den / rate.num);
    }
  }
  s.has_stddev = with_stddev;
  return R::success(s);
}

}  // namespace sfp
