#include "sfpbench/kernels.hpp"

#include <algorithm>
#include <array>
#include <queue>

namespace sfp {
namespace {

std::array<std::uint32_t, 256> make_crc_table() {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    table[i] = c;
  }
  return table;
}

constexpr std::array<int, 16> kIndexTable = {
    -1, -1, -1, -1, 2, 4, 6, 8, -1, -1, -1, -1, 2, 4, 6, 8,
};

constexpr std::array<int, 89> kStepTable = {
    7,     8,     9,     10,    11,    12,    13,    14,    16,    17,
    19,    21,    23,    25,    28,    31,    34,    37,    41,    45,
    50,    55,    60,    66,    73,    80,    88,    97,    107,   118,
    130,   143,   157,   173,   190,   209,   230,   253,   279,   307,
    337,   371,   408,   449,   494,   544,   598,   658,   724,   796,
    876,   963,   1060,  1166,  1282,  1411,  1552,  1707,  1878,  2066,
    2272,  2499,  2749,  3024,  3327,  3660,  4026,  4428,  4871,  5358,
    5894,  6484,  7132,  7845,  8630,  9493,  10442, 11487, 12635, 13899,
    15289, 16818, 18500, 20350, 22385, 24623, 27086, 29794, 32767,
};

struct AdpcmState {
  int predictor = 0;
  int index = 0;

  std::uint8_t encode_one(int sample) {
    int step = kStepTable[index];
    int diff = sample - predictor;
    std::uint8_t code = 0;
    if (diff < 0) {
      code = 8;
      diff = -diff;
    }
    if (diff >= step) {
      code |= 4;
      diff -= step;
    }
    if (diff >= step >> 1) {
      code |= 2;
      diff -= step >> 1;
    }
    if (diff >= step >> 2) code |= 1;
    apply(code);
    return code;
  }

  int decode_one(std::uint8_t code) {
    apply(code);
    return predictor;
  }

 private:
  void apply(std::uint8_t code) {
    int step = kStepTable[index];
    int delta = step >> 3;
    if (code & 4) delta += step;
    if (code & 2) delta += step >> 1;
    if (code & 1) delta += step >> 2;
    if (code & 8)
      predictor -= delta;
    else
      predictor += delta;
    predictor = std::clamp(predictor, -32768, 32767);
    index = std::clamp(index + kIndexTable[code & 15], 0, 88);
  }
};

int clamp_coord(int v, int hi) { return std::clamp(v, 0, hi - 1); }

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> data) {
  static const std::array<std::uint32_t, 256> table = make_crc_table();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::uint8_t b : data) crc = table[(crc ^ b) & 0xFF] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

std::uint32_t additive_checksum(std::span<const std::uint8_t> data) {
  std::uint32_t sum = 0;
  for (std::uint8_t b : data) sum += b;
  return sum;
}

Result<std::vector<std::uint64_t>> dijkstra(const Graph& g, int source) {
  using R = Result<std::vector<std::uint64_t>>;
  if (g.nodes <= 0 || source < 0 || source >= g.nodes)
    return R::failure(StatusCode::ConfigInvalid);

  std::vector<std::vector<std::pair<int, std::uint64_t>>> adj(g.nodes);
  for (const GraphEdge& e : g.edges) {
    if (e.weight < 0) return R::failure(StatusCode::NegativeWeight);
    if (e.from < 0 || e.from >= g.nodes || e.to < 0 || e.to >= g.nodes)
      return R::failure(StatusCode::ConfigInvalid);
    adj[e.from].emplace_back(e.to, static_cast<std::uint64_t>(e.weight));
  }

  std::vector<std::uint64_t> dist(g.nodes, kUnreachable);
  dist[source] = 0;
  using Item = std::pair<std::uint64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.emplace(0, source);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d != dist[u]) continue;
    for (auto [v, w] : adj[u]) {
      std::uint64_t nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        pq.emplace(nd, v);
      }
    }
  }
  return R::success(std::move(dist));
}

Result<Image> gaussian3(const Image& img) {
  using R = Result<Image>;
  if (img.width < 3 || img.height < 3) return R::failure(StatusCode::ImageTooSmall);
  static constexpr int k[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
  Image out{img.width, img.height, std::vector<std::uint8_t>(img.pixels.size())};
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      int acc = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          acc += k[dy + 1][dx + 1] *
                 img.at(clamp_coord(x + dx, img.width), clamp_coord(y + dy, img.height));
      out.pixels[static_cast<std::size_t>(y) * out.width + x] =
          static_cast<std::uint8_t>((acc + 8) / 16);
    }
  }
  return R::success(std::move(out));
}

Result<Image> sobel3(const Image& img) {
  using R = Result<Image>;
  if (img.width < 3 || img.height < 3) return R::failure(StatusCode::ImageTooSmall);
  static constexpr int gx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static constexpr int gy[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  Image out{img.width, img.height, std::vector<std::uint8_t>(img.pixels.size())};
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      int ax = 0, ay = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          int p = img.at(clamp_coord(x + dx, img.width), clamp_coord(y + dy, img.height));
          ax += gx[dy + 1][dx + 1] * p;
          ay += gy[dy + 1][dx + 1] * p;
        }
      }
      int mag = std::abs(ax) + std::abs(ay);
      out.pixels[static_cast<std::size_t>(y) * out.width + x] =
          static_cast<std::uint8_t>(std::min(mag, 255));
    }
  }
  return R::success(std::move(out));
}

Result<Image> sobel_pipeline(const Image& img) {
  auto blurred = gaussian3(img);
  if (!blurred.ok()) return blurred;
  return sobel3(blurred.value);
}

std::vector<std::uint8_t> adpcm_encode(std::span<const std::int16_t> samples) {
  AdpcmState st;
  std::vector<std::uint8_t> out((samples.size() + 1) / 2, 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::uint8_t code = st.encode_one(samples[i]);
    if (i % 2 == 0)
      out[i / 2] = code;
    else
      out[i / 2] |= static_cast<std::uint8_t>(code << 4);
  }
  return out;
}

std::vector<std::int16_t> adpcm_decode(std::span<const std::uint8_t> codes,
                                       std::size_t sample_count) {
  AdpcmState st;
  std::vector<std::int16_t> out;
  out.reserve(sample_count);
  for (std::size_t i = 0; i < sample_count; ++i) {
    std::uint8_t byte = i / 2 < codes.size() ? codes[i / 2] : 0;
    std::uint8_t code = i % 2 == 0 ? byte & 0x0F : byte >> 4;
    out.push_back(static_cast<std::int16_t>(st.decode_one(code)));
  }
  return out;
}

Result<Matrix> matrix_multiply(const Matrix& a, const Matrix& b) {
  using R = Result<Matrix>;
  if (a.n <= 0 || a.n != b.n) return R::failure(StatusCode::DimensionMismatch);
  if (a.cells.size() != static_cast<std::size_t>(a.n) * a.n ||
      b.cells.size() != static_cast<std::size_t>(b.n) * b.n)
    return R::failure(StatusCode::DimensionMismatch);
  Matrix out{a.n, std::vector<std::int64_t>(a.cells.size(), 0)};
  for (int i = 0; i < a.n; ++i)
    for (int k = 0; k < a.n; ++k) {
      std::int64_t aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < a.n; ++j)
        out.cells[static_cast<std::size_t>(i) * a.n + j] += aik * b.at(k, j);
    }
  return R::success(std::move(out));
}

}  // namespace sfp
