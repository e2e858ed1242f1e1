#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sfpbench/status.hpp"

namespace sfp {

// CRC-32, reflected form, polynomial 0xEDB88320, init/final 0xFFFFFFFF.
// crc32("123456789") == 0xCBF43926.
std::uint32_t crc32(std::span<const std::uint8_t> data);

// Plain additive byte checksum; the fixed arithmetic body used inside the
// lock-protected workload benchmarks.
std::uint32_t additive_checksum(std::span<const std::uint8_t> data);

inline constexpr std::uint64_t kUnreachable = UINT64_MAX;

struct GraphEdge {
  int from = 0;
  int to = 0;
  std::int64_t weight = 0;
};

struct Graph {
  int nodes = 0;
  std::vector<GraphEdge> edges;  // directed
};

// Single-source shortest distances; unreachable nodes get kUnreachable.
Result<std::vector<std::uint64_t>> dijkstra(const Graph& g, int source);

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major grayscale

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

// 3x3 Gaussian blur (1 2 1 / 2 4 2 / 1 2 1, divided by 16 with rounding).
// Borders replicate the edge pixel. Output dimensions equal the input.
Result<Image> gaussian3(const Image& img);

// Sobel gradient magnitude |Gx| + |Gy|, clamped to 255, border replicated.
Result<Image> sobel3(const Image& img);

// The benchmark pipeline: blur, then edge magnitude.
Result<Image> sobel_pipeline(const Image& img);

// IMA ADPCM, 4 bits per sample, low nibble first. Encoder and decoder start
// from predictor 0, step index 0; ceil(N/2) bytes for N samples.
std::vector<std::uint8_t> adpcm_encode(std::span<const std::int16_t> samples);
std::vector<std::int16_t> adpcm_decode(std::span<const std::uint8_t> codes,
                                       std::size_t sample_count);

struct Matrix {
  int n = 0;
  std::vector<std::int64_t> cells;  // row-major n*n

  std::int64_t at(int r, int c) const {
    return cells[static_cast<std::size_t>(r) * n + c];
  }
};

Result<Matrix> matrix_multiply(const Matrix& a, const Matrix& b);

}  // namespace sfp
