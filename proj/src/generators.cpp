#include "patchsize/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "patchsize/random.hpp"

namespace patchsize {

Edge pair_from_index(std::uint64_t k) {
  auto j = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
  while (j > 1 && j * (j - 1) / 2 > k) --j;
  while ((j + 1) * j / 2 <= k) ++j;
  const std::uint64_t i = k - j * (j - 1) / 2;
  return {static_cast<Vertex>(i), static_cast<Vertex>(j)};
}

Graph gen_gnp(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_gnp: n must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gen_gnp: p must lie in [0,1], got " + std::to_string(p));
  if (p == 0.0 || n < 2) return Graph::empty(n);
  if (p == 1.0) return Graph::complete(n);

  Rng rng(seed);
  const double log_q = std::log1p(-p);
  const auto total = static_cast<double>(pair_count(n));
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(p * total * 1.05) + 16);

  // Batagelj-Brandes skipping: (w, v) walks pairs with w < v in column order.
  std::int64_t v = 1;
  std::int64_t w = -1;
  const auto vn = static_cast<std::int64_t>(n);
  while (v < vn) {
    const double skip = std::floor(std::log1p(-uniform01(rng)) / log_q);
    w += 1 + static_cast<std::int64_t>(std::min(skip, total));
    while (w >= v && v < vn) {
      w -= v;
      ++v;
    }
    if (v < vn) edges.push_back({static_cast<Vertex>(w), static_cast<Vertex>(v)});
  }
  return Graph::from_edges(n, edges);
}

Graph gen_gnm(std::size_t n, std::uint64_t m, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_gnm: n must be positive");
  const std::uint64_t total = pair_count(n);
  if (m > total) {
    throw std::invalid_argument("gen_gnm: m=" + std::to_string(m) + " exceeds the " + std::to_string(total) +
                                " vertex pairs of n=" + std::to_string(n));
  }
  if (m == total) return Graph::complete(n);

  Rng rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(m));
  std::vector<std::uint64_t> picks;
  picks.reserve(static_cast<std::size_t>(m));
  for (std::uint64_t j = total - m; j < total; ++j) {
    const std::uint64_t t = uniform_below(rng, j + 1);
    const std::uint64_t pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    picks.push_back(pick);
  }
  std::sort(picks.begin(), picks.end());
  std::vector<Edge> edges;
  edges.reserve(picks.size());
  for (auto k : picks) edges.push_back(pair_from_index(k));
  return Graph::from_edges(n, edges);
}

Graph generate(std::size_t n, const RandomModel& model) {
  return std::visit(
      [&](const auto& kind) -> Graph {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, Gnp>) {
          return gen_gnp(n, kind.p, model.seed);
        } else {
          return gen_gnm(n, kind.m, model.seed);
        }
      },
      model.kind);
}

}  // namespace patchsize
