#include <gtest/gtest.h>

#include <queue>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "patchsize/graph.hpp"

using namespace patchsize;

namespace {

// Reference component labelling by BFS, canonicalized to first-seen order.
std::vector<std::size_t> bfs_labels(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> label(n, n);
  std::size_t next = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (label[start] != n) continue;
    std::queue<std::size_t> q;
    q.push(start);
    label[start] = next;
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      for (Vertex w : g.neighbors(static_cast<Vertex>(v))) {
        if (label[w] == n) {
          label[w] = next;
          q.push(w);
        }
      }
    }
    ++next;
  }
  return label;
}

bool same_partition(const std::vector<std::uint32_t>& a, const std::vector<std::size_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

}  // namespace

TEST(Graph, FromEdgesBuildsSortedCsr) {
  const std::vector<Edge> edges{{2, 0}, {0, 1}, {3, 1}};
  const Graph g = Graph::from_edges(4, edges);
  EXPECT_EQ(g.num_vertices(), 4u);
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_EQ(g.max_degree(), 2u);
  ASSERT_EQ(g.neighbors(0).size(), 2u);
  EXPECT_EQ(g.neighbors(0)[0], 1u);
  EXPECT_EQ(g.neighbors(0)[1], 2u);
  EXPECT_TRUE(g.has_edge(1, 3));
  EXPECT_TRUE(g.has_edge(3, 1));
  EXPECT_FALSE(g.has_edge(2, 3));
  const std::vector<Edge> expect{{0, 1}, {0, 2}, {1, 3}};
  EXPECT_EQ(g.edges(), expect);
}

TEST(Graph, FromEdgesRejectsInvalidInput) {
  const std::vector<Edge> loop{{1, 1}};
  const std::vector<Edge> dup{{0, 1}, {1, 0}};
  const std::vector<Edge> range{{0, 5}};
  EXPECT_THROW(Graph::from_edges(3, loop), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, dup), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, range), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(0, {}), std::invalid_argument);
}

TEST(Graph, NamedFamilies) {
  EXPECT_EQ(Graph::complete(7).num_edges(), 21u);
  EXPECT_EQ(Graph::path(7).num_edges(), 6u);
  EXPECT_EQ(Graph::empty(7).num_edges(), 0u);
  EXPECT_EQ(Graph::complete(1).num_edges(), 0u);
  EXPECT_TRUE(is_connected(Graph::path(9)));
  EXPECT_FALSE(is_connected(Graph::empty(2)));
}

TEST(Graph, WithEdgeAddsExactlyOneEdge) {
  const Graph g = Graph::path(4);
  const Graph h = g.with_edge({3, 0});
  EXPECT_EQ(h.num_edges(), 4u);
  EXPECT_TRUE(h.has_edge(0, 3));
  EXPECT_THROW(g.with_edge({0, 1}), std::invalid_argument);
}

TEST(Graph, DegreeSumIsTwiceEdgeCount) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = reference::bernoulli_graph(1 + trial % 40, 0.3, rng);
    std::size_t sum = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      sum += g.degree(v);
      const auto nb = g.neighbors(v);
      EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    }
    EXPECT_EQ(sum, 2 * g.num_edges());
  }
}

TEST(Habitat, SinkCountMustLeaveAnInteriorVertex) {
  EXPECT_THROW(Habitat(Graph::path(3), 3), std::invalid_argument);
  const Habitat h(Graph::path(3), 0);
  EXPECT_EQ(h.num_interior(), 3u);
  EXPECT_FALSE(h.is_sink(0));
}

TEST(Habitat, InducedSubgraphAndSinkAdjacency) {
  // Sinks {0, 1}; interior {2, 3, 4}.
  const std::vector<Edge> edges{{0, 2}, {1, 2}, {0, 3}, {2, 3}, {3, 4}, {0, 1}};
  const Habitat h(Graph::from_edges(5, edges), 2);
  const Graph inner = induced_subgraph(h);
  EXPECT_EQ(inner.num_vertices(), 3u);
  EXPECT_EQ(inner.num_edges(), 2u);
  EXPECT_TRUE(inner.has_edge(0, 1));
  EXPECT_TRUE(inner.has_edge(1, 2));
  EXPECT_EQ(sink_adjacency(h), (std::vector<std::size_t>{2, 1, 0}));
}

TEST(Components, MatchesBreadthFirstSearch) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 30;
    const double p = std::uniform_real_distribution<double>(0.0, 0.25)(rng);
    const Graph g = reference::bernoulli_graph(n, p, rng);
    const Components c = connected_components(g);
    const auto ref = bfs_labels(g);
    EXPECT_EQ(c.count, *std::max_element(ref.begin(), ref.end()) + 1);
    EXPECT_TRUE(same_partition(c.label, ref));
    EXPECT_EQ(is_connected(g), c.count == 1);
  }
}

TEST(GraphIo, RoundTrip) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = reference::bernoulli_graph(1 + trial, 0.2, rng);
    std::stringstream buf;
    write_graph(buf, g);
    EXPECT_EQ(read_graph(buf), g);
  }
}

TEST(GraphIo, ReadsFixtureWithCommentsAndBlankLines) {
  const Graph g = read_graph_file(PATCHSIZE_TEST_DATA "/path3.txt");
  EXPECT_EQ(g, Graph::path(3));
}

TEST(GraphIo, RejectsMalformedInput) {
  const char* bad[] = {
      "",                // no header
      "3 1\n1 1\n",      // self-loop
      "3 1\n2 1\n",      // i > j
      "3 1\n1 4\n",      // out of range
      "3 1\n0 2\n",      // zero-based
      "3 2\n1 2\n",      // too few edges
      "3 1\n1 2\n2 3\n", // too many edges
      "3 2\n1 2\n1 2\n", // duplicate
      "3 1\n1 x\n",      // malformed
      "3 1\n1 2 7\n",    // trailing content
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    EXPECT_ANY_THROW(read_graph(in)) << '"' << text << '"';
  }
  EXPECT_THROW(read_graph_file("/nonexistent/graph.txt"), std::runtime_error);
}
