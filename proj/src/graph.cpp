#include "patchsize/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace patchsize {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) throw std::invalid_argument("graph must have at least one vertex");
  if (n > std::size_t{std::numeric_limits<Vertex>::max()}) {
    throw std::invalid_argument("graph has too many vertices");
  }
  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw std::invalid_argument("edge endpoint out of range: {" + std::to_string(e.u + 1) +
                                  "," + std::to_string(e.v + 1) + "}");
    }
    if (e.u == e.v) {
      throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u + 1));
    }
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.adjacency_.resize(g.offsets_.back());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : edges) {
    g.adjacency_[cursor[e.u]++] = e.v;
    g.adjacency_[cursor[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(first, last);
    if (auto dup = std::adjacent_find(first, last); dup != last) {
      throw std::invalid_argument("duplicate edge {" + std::to_string(std::min<std::size_t>(v, *dup) + 1) +
                                  "," + std::to_string(std::max<std::size_t>(v, *dup) + 1) + "}");
    }
  }
  return g;
}

Graph Graph::complete(std::size_t n) {
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  return from_edges(n, edges);
}

Graph Graph::path(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1});
  return from_edges(n, edges);
}

Graph Graph::empty(std::size_t n) { return from_edges(n, {}); }

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (std::size_t v = 0; v + 1 < offsets_.size(); ++v) best = std::max(best, offsets_[v + 1] - offsets_[v]);
  return best;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (u >= num_vertices() || v >= num_vertices()) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (Vertex u = 0; u < num_vertices(); ++u)
    for (Vertex v : neighbors(u))
      if (u < v) out.push_back({u, v});
  return out;
}

Graph Graph::with_edge(Edge e) const {
  auto list = edges();
  list.push_back(e);
  return from_edges(num_vertices(), list);
}

Habitat::Habitat(Graph graph, std::size_t sinks) : graph_(std::move(graph)), sinks_(sinks) {
  if (graph_.num_vertices() == 0) throw std::invalid_argument("habitat graph is empty");
  if (sinks_ >= graph_.num_vertices()) {
    throw std::invalid_argument("habitat needs at least one non-sink vertex (s=" + std::to_string(sinks_) +
                                ", n=" + std::to_string(graph_.num_vertices()) + ")");
  }
}

Graph induced_subgraph(const Habitat& h) {
  const auto s = static_cast<Vertex>(h.sinks());
  const Graph& g = h.graph();
  std::vector<Edge> edges;
  for (Vertex u = s; u < g.num_vertices(); ++u)
    for (Vertex v : g.neighbors(u))
      if (v > u) edges.push_back({u - s, v - s});
  return Graph::from_edges(h.num_interior(), edges);
}

std::vector<std::size_t> sink_adjacency(const Habitat& h) {
  const auto s = static_cast<Vertex>(h.sinks());
  const Graph& g = h.graph();
  std::vector<std::size_t> z(h.num_interior(), 0);
  for (Vertex u = s; u < g.num_vertices(); ++u) {
    auto nb = g.neighbors(u);
    // Neighbor lists are sorted, so sinks form a prefix.
    z[u - s] = static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), s) - nb.begin());
  }
  return z;
}

Components connected_components(const Graph& g) {
  const auto n = g.num_vertices();
  DisjointSets sets(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : g.neighbors(u))
      if (u < v) sets.unite(u, v);

  Components out;
  out.label.assign(n, 0);
  std::vector<std::uint32_t> root_label(n, std::numeric_limits<std::uint32_t>::max());
  for (Vertex v = 0; v < n; ++v) {
    auto root = sets.find(v);
    if (root_label[root] == std::numeric_limits<std::uint32_t>::max()) {
      root_label[root] = static_cast<std::uint32_t>(out.count++);
    }
    out.label[v] = root_label[root];
  }
  return out;
}

bool is_connected(const Graph& g) {
  if (g.num_vertices() == 0) throw std::invalid_argument("is_connected: empty graph");
  return connected_components(g).count == 1;
}

Graph read_graph(std::istream& in) {
  auto next_line = [&](std::string& line) {
    while (std::getline(in, line)) {
      auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos && line[pos] != '#') return true;
    }
    return false;
  };

  std::string line;
  if (!next_line(line)) throw std::invalid_argument("graph file: missing header line \"n m\"");
  std::istringstream header(line);
  long long n = 0;
  long long m = 0;
  if (!(header >> n >> m) || n <= 0 || m < 0) {
    throw std::invalid_argument("graph file: malformed header \"" + line + "\"");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    if (!next_line(line)) {
      throw std::invalid_argument("graph file: expected " + std::to_string(m) + " edges, found " +
                                  std::to_string(k));
    }
    std::istringstream row(line);
    long long i = 0;
    long long j = 0;
    if (!(row >> i >> j) || !(row >> std::ws).eof()) {
      throw std::invalid_argument("graph file: malformed edge line \"" + line + "\"");
    }
    if (i == j) throw std::invalid_argument("graph file: self-loop at vertex " + std::to_string(i));
    if (i > j) throw std::invalid_argument("graph file: edge \"" + line + "\" must satisfy i < j");
    if (i < 1 || j > n) throw std::invalid_argument("graph file: edge \"" + line + "\" out of range");
    edges.push_back({static_cast<Vertex>(i - 1), static_cast<Vertex>(j - 1)});
  }
  if (next_line(line)) throw std::invalid_argument("graph file: trailing content after edge list");
  return Graph::from_edges(static_cast<std::size_t>(n), edges);
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u + 1 << ' ' << e.v + 1 << '\n';
}

void write_graph_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  write_graph(out, g);
}

}  // namespace patchsize
