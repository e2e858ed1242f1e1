#pragma once

#include <chrono>
#include <cstdint>

#include "sfpbench/timebase.hpp"

namespace sfp {

enum class ClockMode : std::uint8_t { Virtual, Host };

// The executive's time source. In Virtual mode the clock moves only when the
// kernel charges modeled costs; in Host mode it mirrors the process-wide
// monotonic clock, anchored at reset() and converted to ticks at `rate`.
class Clock {
 public:
  Clock() = default;
  Clock(ClockMode mode, TickRate rate) : mode_(mode), rate_(rate) {}

  void reset() {
    virtual_now_ = 0;
    anchor_ = std::chrono::steady_clock::now();
  }

  ClockMode mode() const { return mode_; }

  std::uint64_t now_ticks() const {
    if (mode_ == ClockMode::Virtual) return virtual_now_;
    auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                  std::chrono::steady_clock::now() - anchor_)
                  .count();
    // ticks = ns * (num/den) / 1000, kept in integers.
    using U128 = unsigned __int128;
    return static_cast<std::uint64_t>((U128)ns * rate_.num / ((U128)rate_.den * 1000));
  }

  // Virtual-mode only: move time forward. No-op on the host clock, which
  // advances on its own.
  void advance(std::uint64_t ticks) {
    if (mode_ == ClockMode::Virtual) virtual_now_ += ticks;
  }
  void advance_to(std::uint64_t tick) {
    if (mode_ == ClockMode::Virtual && tick > virtual_now_) virtual_now_ = tick;
  }

 private:
  ClockMode mode_ = ClockMode::Virtual;
  TickRate rate_{};
  std::uint64_t virtual_now_ = 0;
  std::chrono::steady_clock::time_point anchor_ = std::chrono::steady_clock::now();
};

}  // namespace sfp
