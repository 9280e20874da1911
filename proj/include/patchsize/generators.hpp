#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>

#include "patchsize/graph.hpp"

namespace patchsize {

struct Gnp {
  double p;
};
struct Gnm {
  std::uint64_t m;
};

/// Random graph model plus the seed of its stream.
struct RandomModel {
  std::variant<Gnp, Gnm> kind;
  std::uint64_t seed = 0;
};

/// Number of unordered vertex pairs, n(n-1)/2.
constexpr std::uint64_t pair_count(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

/// Binomial random graph G(n, p).
///
/// Pairs are visited in the linear order (0,1), (0,2), (1,2), (0,3), ... and
/// the gap to the next present pair is drawn from a geometric distribution,
/// so the cost is O(n + |E|) rather than one coin flip per pair.
Graph gen_gnp(std::size_t n, double p, std::uint64_t seed);

/// Uniform random graph with exactly m edges (Floyd's subset sampling over
/// the pair index space).
Graph gen_gnm(std::size_t n, std::uint64_t m, std::uint64_t seed);

Graph generate(std::size_t n, const RandomModel& model);

/// Maps a pair index k in [0, n(n-1)/2) to the pair (i, j), i < j, with
/// k = j(j-1)/2 + i.
Edge pair_from_index(std::uint64_t k);

}  // namespace patchsize
