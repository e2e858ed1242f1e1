#include "sfpbench/data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sfp {

Image default_image(std::uint64_t seed) {
  Rng rng(seed);
  Image img{64, 64, std::vector<std::uint8_t>(64 * 64)};
  // Diagonal gradient plus noise: gives the edge detector real structure
  // instead of white noise, while staying fully reproducible.
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      int base = (x * 2 + y * 2) % 256;
      int noise = static_cast<int>(rng.below(32));
      img.pixels[static_cast<std::size_t>(y) * img.width + x] =
          static_cast<std::uint8_t>(std::min(base + noise, 255));
    }
  }
  return img;
}

Graph default_graph(std::uint64_t seed) {
  Rng rng(seed);
  Graph g;
  g.nodes = 16;
  // A ring first so every node is reachable, then random chords.
  for (int i = 0; i < 16; ++i)
    g.edges.push_back({i, (i + 1) % 16, rng.range(1, 100)});
  while (g.edges.size() < 40) {
    int from = static_cast<int>(rng.below(16));
    int to = static_cast<int>(rng.below(16));
    if (from == to) continue;
    g.edges.push_back({from, to, rng.range(1, 100)});
  }
  return g;
}

std::vector<std::int16_t> default_signal(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::int16_t> out(4096);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 8000.0 * std::sin(2.0 * 3.14159265358979323846 * i / 64.0);
    int noise = static_cast<int>(rng.below(1024)) - 512;
    int v = static_cast<int>(std::lround(s)) + noise;
    out[i] = static_cast<std::int16_t>(std::clamp(v, -32768, 32767));
  }
  return out;
}

std::pair<Matrix, Matrix> default_matrices(std::uint64_t seed) {
  Rng rng(seed);
  auto make = [&rng] {
    Matrix m{8, std::vector<std::int64_t>(64)};
    for (auto& c : m.cells) c = rng.range(-100, 100);
    return m;
  };
  Matrix a = make();
  Matrix b = make();
  return {std::move(a), std::move(b)};
}

std::vector<std::uint8_t> random_block(Rng& rng, std::size_t bytes) {
  std::vector<std::uint8_t> out(bytes);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng.below(256));
  return out;
}

Result<Image> load_pgm(const std::string& path) {
  using R = Result<Image>;
  std::ifstream in(path, std::ios::binary);
  if (!in) return R::failure(StatusCode::ConfigInvalid);

  auto next_token = [&in]() -> std::string {
    std::string tok;
    while (in) {
      int c = in.get();
      if (c == '#') {  // comment runs to end of line
        while (in && in.get() != '\n') {
        }
        continue;
      }
      if (c == EOF) break;
      if (std::isspace(c)) {
        if (!tok.empty()) break;
        continue;
      }
      tok.push_back(static_cast<char>(c));
    }
    return tok;
  };

  if (next_token() != "P5") return R::failure(StatusCode::ConfigInvalid);
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_token());
    height = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (...) {
    return R::failure(StatusCode::ConfigInvalid);
  }
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255)
    return R::failure(StatusCode::ConfigInvalid);

  Image img{width, height,
            std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height)};
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != img.pixels.size())
    return R::failure(StatusCode::ConfigInvalid);
  return R::success(std::move(img));
}

Result<Graph> load_edge_list(const std::string& path) {
  using R = Result<Graph>;
  std::ifstream in(path);
  if (!in) return R::failure(StatusCode::ConfigInvalid);
  Graph g;
  std::size_t edge_count = 0;
  if (!(in >> g.nodes >> edge_count) || g.nodes <= 0)
    return R::failure(StatusCode::ConfigInvalid);
  for (std::size_t i = 0; i < edge_count; ++i) {
    GraphEdge e;
    if (!(in >> e.from >> e.to >> e.weight)) return R::failure(StatusCode::ConfigInvalid);
    if (e.from < 0 || e.from >= g.nodes || e.to < 0 || e.to >= g.nodes)
      return R::failure(StatusCode::ConfigInvalid);
    if (e.weight < 0) return R::failure(StatusCode::NegativeWeight);
    g.edges.push_back(e);
  }
  return R::success(std::move(g));
}

Result<std::vector<std::int16_t>> load_signal_raw16(const std::string& path) {
  using R = Result<std::vector<std::int16_t>>;
  std::ifstream in(path, std::ios::binary);
  if (!in) return R::failure(StatusCode::ConfigInvalid);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.empty() || bytes.size() % 2 != 0)
    return R::failure(StatusCode::ConfigInvalid);
  std::vector<std::int16_t> out(bytes.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(bytes[2 * i]) |
        (static_cast<std::uint16_t>(bytes[2 * i + 1]) << 8));
  return R::success(std::move(out));
}

}  // namespace sfp
