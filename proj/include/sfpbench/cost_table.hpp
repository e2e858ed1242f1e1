#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace sfp {

// Tick prices for the virtual clock. Every executive service charges its
// entry (or default_cost when unlisted) on entry; the two switch costs are
// charged by the scheduler itself. All zero is legal but starves the idle
// detector, so the kernel enforces a step cap as a backstop.
struct CostTable {
  std::uint64_t default_cost = 10;
  std::uint64_t process_switch = 113;
  std::uint64_t partition_switch = 1682;
  std::map<std::string, std::uint64_t, std::less<>> entries;

  std::uint64_t cost_of(std::string_view op) const {
    auto it = entries.find(op);
    return it == entries.end() ? default_cost : it->second;
  }
};

}  // namespace sfp
