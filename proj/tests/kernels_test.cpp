#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sfpbench/data.hpp"
#include "sfpbench/kernels.hpp"

using namespace sfp;

// Reference implementations, written independently of src/kernels.cpp:
// bit-serial CRC, Floyd-Warshall, direct 3x3 convolution, the canonical IMA
// ADPCM step tables, and a naive triple loop.

namespace {

std::uint32_t crc32_bitwise(std::span<const std::uint8_t> data) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::uint8_t byte : data) {
    crc ^= byte;
    for (int i = 0; i < 8; ++i)
      crc = (crc >> 1) ^ ((crc & 1) ? 0xEDB88320u : 0u);
  }
  return ~crc;
}

std::vector<std::vector<std::uint64_t>> floyd_warshall(const Graph& g) {
  const std::size_t n = static_cast<std::size_t>(g.nodes);
  std::vector<std::vector<std::uint64_t>> d(n,
                                            std::vector<std::uint64_t>(n, kUnreachable));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges) {
    auto w = static_cast<std::uint64_t>(e.weight);
    auto& cell = d[static_cast<std::size_t>(e.from)][static_cast<std::size_t>(e.to)];
    cell = std::min(cell, w);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][k] == kUnreachable) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (d[k][j] == kUnreachable) continue;
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  return d;
}

std::uint8_t pixel_rep(const Image& img, int x, int y) {
  x = std::clamp(x, 0, img.width - 1);
  y = std::clamp(y, 0, img.height - 1);
  return img.at(x, y);
}

Image gaussian3_direct(const Image& img) {
  static const int kW[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
  Image out{img.width, img.height, {}};
  out.pixels.resize(img.pixels.size());
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      int sum = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          sum += kW[dy + 1][dx + 1] * pixel_rep(img, x + dx, y + dy);
      out.pixels[static_cast<std::size_t>(y) * img.width + x] =
          static_cast<std::uint8_t>((sum + 8) / 16);
    }
  return out;
}

Image sobel3_direct(const Image& img) {
  static const int kGx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static const int kGy[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  Image out{img.width, img.height, {}};
  out.pixels.resize(img.pixels.size());
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      int gx = 0, gy = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          int p = pixel_rep(img, x + dx, y + dy);
          gx += kGx[dy + 1][dx + 1] * p;
          gy += kGy[dy + 1][dx + 1] * p;
        }
      out.pixels[static_cast<std::size_t>(y) * img.width + x] =
          static_cast<std::uint8_t>(std::min(255, std::abs(gx) + std::abs(gy)));
    }
  return out;
}

const int kImaIndexTable[8] = {-1, -1, -1, -1, 2, 4, 6, 8};
const int kImaStepTable[89] = {
    7,     8,     9,     10,    11,    12,    13,    14,    16,    17,
    19,    21,    23,    25,    28,    31,    34,    37,    41,    45,
    50,    55,    60,    66,    73,    80,    88,    97,    107,   118,
    130,   143,   157,   173,   190,   209,   230,   253,   279,   307,
    337,   371,   408,   449,   494,   544,   598,   658,   724,   796,
    876,   963,   1060,  1166,  1282,  1411,  1552,  1707,  1878,  2066,
    2272,  2499,  2749,  3024,  3327,  3660,  4026,  4428,  4871,  5358,
    5894,  6484,  7132,  7845,  8630,  9493,  10442, 11487, 12635, 13899,
    15289, 16818, 18500, 20350, 22385, 24623, 27086, 29794, 32767};

std::vector<std::uint8_t> ima_encode_ref(std::span<const std::int16_t> samples) {
  std::vector<std::uint8_t> out((samples.size() + 1) / 2, 0);
  int pred = 0, index = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    int step = kImaStepTable[index];
    int diff = samples[i] - pred;
    int nibble = 0;
    if (diff < 0) {
      nibble = 8;
      diff = -diff;
    }
    int vpdiff = step >> 3;
    if (diff >= step) {
      nibble |= 4;
      diff -= step;
      vpdiff += step;
    }
    step >>= 1;
    if (diff >= step) {
      nibble |= 2;
      diff -= step;
      vpdiff += step;
    }
    step >>= 1;
    if (diff >= step) {
      nibble |= 1;
      vpdiff += step;
    }
    pred = (nibble & 8) ? pred - vpdiff : pred + vpdiff;
    pred = std::clamp(pred, -32768, 32767);
    index = std::clamp(index + kImaIndexTable[nibble & 7], 0, 88);
    if (i % 2 == 0)
      out[i / 2] = static_cast<std::uint8_t>(nibble);
    else
      out[i / 2] |= static_cast<std::uint8_t>(nibble << 4);
  }
  return out;
}

std::vector<std::int16_t> ima_decode_ref(std::span<const std::uint8_t> codes,
                                         std::size_t sample_count) {
  std::vector<std::int16_t> out;
  out.reserve(sample_count);
  int pred = 0, index = 0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    int nibble = (i % 2 == 0) ? (codes[i / 2] & 0x0F) : (codes[i / 2] >> 4);
    int step = kImaStepTable[index];
    int vpdiff = step >> 3;
    if (nibble & 4) vpdiff += step;
    if (nibble & 2) vpdiff += step >> 1;
    if (nibble & 1) vpdiff += step >> 2;
    pred = (nibble & 8) ? pred - vpdiff : pred + vpdiff;
    pred = std::clamp(pred, -32768, 32767);
    index = std::clamp(index + kImaIndexTable[nibble & 7], 0, 88);
    out.push_back(static_cast<std::int16_t>(pred));
  }
  return out;
}

double mse(std::span<const std::int16_t> a, std::span<const std::int16_t> b) {
  REQUIRE(a.size() == b.size());
  if (a.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("crc32 matches the check value and a bit-serial reference") {
  const std::uint8_t check[] = {'1', '2', '3', '4', '5', '6', '7', '8', '9'};
  CHECK(crc32(check) == 0xCBF43926u);
  CHECK(crc32({}) == 0x00000000u);

  std::mt19937 rng(0xC4C);
  for (int i = 0; i < 50; ++i) {
    std::vector<std::uint8_t> block(
        static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 300)(rng)));
    for (auto& b : block) b = static_cast<std::uint8_t>(rng());
    CAPTURE(i);
    CHECK(crc32(block) == crc32_bitwise(block));
  }
}

TEST_CASE("additive checksum is the plain byte sum") {
  std::vector<std::uint8_t> block{1, 2, 3, 250, 255};
  CHECK(additive_checksum(block) == 1u + 2 + 3 + 250 + 255);
  CHECK(additive_checksum({}) == 0u);
}

TEST_CASE("dijkstra agrees with floyd-warshall on random graphs") {
  std::mt19937 rng(0xD1785);
  for (int trial = 0; trial < 200; ++trial) {
    CAPTURE(trial);
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const int m = std::uniform_int_distribution<int>(0, n * n)(rng);
    Graph g;
    g.nodes = n;
    for (int e = 0; e < m; ++e)
      g.edges.push_back({std::uniform_int_distribution<int>(0, n - 1)(rng),
                         std::uniform_int_distribution<int>(0, n - 1)(rng),
                         std::uniform_int_distribution<int>(0, 100)(rng)});
    auto all = floyd_warshall(g);
    for (int s = 0; s < n; ++s) {
      auto r = dijkstra(g, s);
      REQUIRE(r.ok());
      CHECK(r.value == all[static_cast<std::size_t>(s)]);
    }
  }
}

TEST_CASE("dijkstra rejects negative weights and bad sources") {
  Graph g;
  g.nodes = 3;
  g.edges.push_back({0, 1, -5});
  CHECK(dijkstra(g, 0).status == StatusCode::NegativeWeight);
  Graph ok;
  ok.nodes = 2;
  CHECK(dijkstra(ok, 5).status != StatusCode::Ok);
  CHECK(dijkstra(ok, -1).status != StatusCode::Ok);
}

TEST_CASE("gaussian and sobel match direct convolution on random images") {
  std::mt19937 rng(0x50BE1);
  for (int trial = 0; trial < 20; ++trial) {
    CAPTURE(trial);
    Image img{16, 16, {}};
    img.pixels.resize(16 * 16);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng());

    auto blur = gaussian3(img);
    REQUIRE(blur.ok());
    CHECK(blur.value.pixels == gaussian3_direct(img).pixels);

    auto edges = sobel3(img);
    REQUIRE(edges.ok());
    CHECK(edges.value.pixels == sobel3_direct(img).pixels);

    auto pipe = sobel_pipeline(img);
    REQUIRE(pipe.ok());
    CHECK(pipe.value.pixels == sobel3_direct(gaussian3_direct(img)).pixels);
  }
}

TEST_CASE("image kernels refuse frames smaller than the stencil") {
  Image tiny{2, 2, {0, 0, 0, 0}};
  CHECK(gaussian3(tiny).status == StatusCode::ImageTooSmall);
  CHECK(sobel3(tiny).status == StatusCode::ImageTooSmall);
  CHECK(sobel_pipeline(tiny).status == StatusCode::ImageTooSmall);
}

TEST_CASE("adpcm transcoding matches the canonical tables exactly") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CAPTURE(seed);
    std::vector<std::int16_t> sig = default_signal(seed);
    auto enc = adpcm_encode(sig);
    CHECK(enc == ima_encode_ref(sig));
    CHECK(enc.size() == (sig.size() + 1) / 2);
    auto dec = adpcm_decode(enc, sig.size());
    CHECK(dec == ima_decode_ref(enc, sig.size()));
    // Round-trip error can't beat the reference codec's own bound.
    CHECK(mse(dec, sig) <= mse(ima_decode_ref(ima_encode_ref(sig), sig.size()),
                               sig) +
                               1e-9);
  }
}

TEST_CASE("adpcm handles degenerate and full-scale signals") {
  std::vector<std::int16_t> empty;
  CHECK(adpcm_encode(empty).empty());
  CHECK(adpcm_decode({}, 0).empty());

  std::vector<std::int16_t> odd{100, -200, 300};
  auto enc = adpcm_encode(odd);
  CHECK(enc.size() == 2);
  CHECK(adpcm_decode(enc, odd.size()) == ima_decode_ref(enc, odd.size()));

  std::vector<std::int16_t> extremes;
  for (int i = 0; i < 64; ++i)
    extremes.push_back(i % 2 == 0 ? std::int16_t{32767} : std::int16_t{-32768});
  auto enc2 = adpcm_encode(extremes);
  CHECK(enc2 == ima_encode_ref(extremes));
  CHECK(adpcm_decode(enc2, extremes.size()) ==
        ima_decode_ref(enc2, extremes.size()));
}

TEST_CASE("matrix multiply agrees with the triple loop on random pairs") {
  std::mt19937 rng(0x3A73);
  for (int trial = 0; trial < 100; ++trial) {
    CAPTURE(trial);
    Matrix a{5, std::vector<std::int64_t>(25)};
    Matrix b{5, std::vector<std::int64_t>(25)};
    auto draw = [&] {
      return static_cast<std::int64_t>(
          std::uniform_int_distribution<int>(-1000, 1000)(rng));
    };
    for (auto& c : a.cells) c = draw();
    for (auto& c : b.cells) c = draw();

    auto r = matrix_multiply(a, b);
    REQUIRE(r.ok());
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        std::int64_t want = 0;
        for (int t = 0; t < 5; ++t) want += a.at(i, t) * b.at(t, j);
        CHECK(r.value.at(i, j) == want);
      }
  }
}

TEST_CASE("matrix multiply rejects dimension mismatches") {
  Matrix a{2, {1, 2, 3, 4}};
  Matrix b{3, std::vector<std::int64_t>(9, 1)};
  CHECK(matrix_multiply(a, b).status == StatusCode::DimensionMismatch);
}

TEST_CASE("embedded datasets are reproducible from their seed") {
  CHECK(default_image(7).pixels == default_image(7).pixels);
  CHECK(default_signal(7) == default_signal(7));
  auto [a1, b1] = default_matrices(7);
  auto [a2, b2] = default_matrices(7);
  CHECK(a1.cells == a2.cells);
  CHECK(b1.cells == b2.cells);
  CHECK(default_graph(3).edges.size() == default_graph(3).edges.size());
  // Different seeds actually change the data.
  CHECK(default_image(1).pixels != default_image(2).pixels);
  CHECK(default_signal(1) != default_signal(2));
}
