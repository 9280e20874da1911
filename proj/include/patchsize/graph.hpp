#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace patchsize {

// Vertices are 0-based internally. Files and user-facing output use 1..n.
using Vertex = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph in compressed sparse row form.
///
/// Neighbor lists are sorted. A Graph is immutable once built; every
/// constructor path validates that there are no self-loops, no duplicate
/// edges and that all endpoints are in range.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on `n` vertices from an arbitrary list of unordered pairs.
  /// Throws std::invalid_argument on n == 0, self-loops, duplicates, or
  /// out-of-range endpoints.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  static Graph complete(std::size_t n);
  static Graph path(std::size_t n);
  static Graph empty(std::size_t n);

  std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return adjacency_.size() / 2; }

  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], degree(v)};
  }
  std::size_t max_degree() const;

  // Raw CSR arrays: neighbors of v are adjacency()[offsets()[v] .. offsets()[v+1]).
  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const Vertex> adjacency() const { return adjacency_; }

  bool has_edge(Vertex u, Vertex v) const;

  /// All edges with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  /// Returns a copy with one additional edge. Throws if the edge exists.
  Graph with_edge(Edge e) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adjacency_;
};

/// A graph plus the number of sinks. Sinks are always vertices 0..s-1.
class Habitat {
 public:
  Habitat(Graph graph, std::size_t sinks);

  const Graph& graph() const { return graph_; }
  std::size_t sinks() const { return sinks_; }
  std::size_t num_vertices() const { return graph_.num_vertices(); }
  std::size_t num_interior() const { return graph_.num_vertices() - sinks_; }
  bool is_sink(Vertex v) const { return v < sinks_; }

 private:
  Graph graph_;
  std::size_t sinks_;
};

/// Subgraph induced by the non-sink vertices, reindexed so that vertex
/// s + k of the habitat becomes vertex k.
Graph induced_subgraph(const Habitat& h);

/// Number of sink neighbors of each non-sink vertex, indexed like
/// induced_subgraph.
std::vector<std::size_t> sink_adjacency(const Habitat& h);

/// Component label per vertex (labels are 0..count-1 in order of the
/// smallest vertex of each component) and the number of components.
struct Components {
  std::vector<std::uint32_t> label;
  std::size_t count = 0;
};
Components connected_components(const Graph& g);

bool is_connected(const Graph& g);

// Text format: first line "n m", then m lines "i j" with 1 <= i < j <= n.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);
void write_graph_file(const std::string& path, const Graph& g);

}  // namespace patchsize
