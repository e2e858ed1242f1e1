#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sfpbench/kernels.hpp"
#include "sfpbench/status.hpp"

namespace sfp {

// splitmix64: tiny, seedable, and identical on every platform, which is all
// the embedded datasets need.
struct Rng {
  std::uint64_t state = 1;

  explicit Rng(std::uint64_t seed = 1) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Unbiased enough for dataset generation; modulo bias is irrelevant here.
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

// Embedded defaults; the seed is the single knob that regenerates them all.
Image default_image(std::uint64_t seed);                      // 64x64 grayscale
Graph default_graph(std::uint64_t seed);                      // 16 nodes, 40 edges
std::vector<std::int16_t> default_signal(std::uint64_t seed); // 4096 samples
std::pair<Matrix, Matrix> default_matrices(std::uint64_t seed);  // 8x8 pair
std::vector<std::uint8_t> random_block(Rng& rng, std::size_t bytes);

// File overrides. Images: binary PGM (P5, maxval <= 255). Graphs: text,
// first line "<nodes> <edges>", then one "<from> <to> <weight>" per line.
// Signals: raw little-endian int16.
Result<Image> load_pgm(const std::string& path);
Result<Graph> load_edge_list(const std::string& path);
Result<std::vector<std::int16_t>> load_signal_raw16(const std::string& path);

}  // namespace sfp
