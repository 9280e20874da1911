#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "patchsize/generators.hpp"
#include "patchsize/spectral.hpp"

using namespace patchsize;
using reference::min_eigenvalue_oracle;

namespace {

SolverOptions force_lanczos() {
  SolverOptions o;
  o.dense_threshold = 0;
  return o;
}

// Sinks {0..s-1} joined to every interior vertex; interior edges arbitrary.
Habitat constant_z_habitat(std::size_t s, std::size_t d, double p, std::mt19937_64& rng) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < s; ++i)
    for (Vertex j = static_cast<Vertex>(s); j < s + d; ++j) edges.push_back({i, j});
  std::bernoulli_distribution coin(p);
  for (Vertex i = s; i < s + d; ++i)
    for (Vertex j = i + 1; j < s + d; ++j)
      if (coin(rng)) edges.push_back({i, j});
  return Habitat(Graph::from_edges(s + d, edges), s);
}

}  // namespace

TEST(Oracle, ClosedFormSpectra) {
  // K_n with s sinks: L^(S) = nI - J on n - s coordinates, smallest eigenvalue s.
  for (std::size_t n = 2; n <= 9; ++n)
    for (std::size_t s = 1; s < n; ++s) EXPECT_NEAR(min_eigenvalue_oracle(Habitat(Graph::complete(n), s)), s, 1e-12);
  // Path with a sink at one end: eigenvalues 2 - 2 cos((2k-1) pi / (2d+1)).
  for (std::size_t d = 1; d <= 10; ++d) {
    const double expect = 2.0 - 2.0 * std::cos(std::numbers::pi / (2.0 * d + 1.0));
    EXPECT_NEAR(min_eigenvalue_oracle(Habitat(Graph::path(d + 1), 1)), expect, 1e-12);
  }
}

TEST(DirichletSystem, MatchesOracleMatrix) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Habitat h = reference::random_habitat(2, 15, rng);
    const DirichletSystem sys(h);
    EXPECT_EQ(sys.dense(), reference::dirichlet_matrix_oracle(h));
    const auto z = sink_adjacency(h);
    EXPECT_EQ(std::vector<std::size_t>(sys.z().begin(), sys.z().end()), z);
    EXPECT_EQ(sys.zeta(), *std::min_element(z.begin(), z.end()));
    EXPECT_EQ(sys.boundary_edges(), std::accumulate(z.begin(), z.end(), std::uint64_t{0}));
  }
}

TEST(DirichletSystem, ApplyMatchesDense) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Habitat h = reference::random_habitat(2, 30, rng);
    const DirichletSystem sys(h);
    const std::size_t d = sys.dim();
    std::vector<double> x(d), y(d);
    for (auto& v : x) v = std::normal_distribution<double>()(rng);
    sys.apply(x, y);
    const auto a = sys.dense();
    for (std::size_t i = 0; i < d; ++i) {
      double ref = 0.0;
      for (std::size_t j = 0; j < d; ++j) ref += a[i * d + j] * x[j];
      EXPECT_NEAR(y[i], ref, 1e-12);
    }
  }
}

TEST(DirichletSystem, CoordinateExport) {
  // Path 1-2-3 with sink 1: L^(S) = [[2, -1], [-1, 1]].
  const DirichletSystem sys(Habitat(Graph::path(3), 1));
  std::ostringstream out;
  sys.write_coordinate(out);
  std::istringstream in(out.str());
  std::size_t dim = 0, nnz = 0;
  in >> dim >> nnz;
  EXPECT_EQ(dim, 2u);
  EXPECT_EQ(nnz, 4u);
  std::vector<double> a(4, 0.0);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t i = 0, j = 0;
    double v = 0;
    in >> i >> j >> v;
    a[(i - 1) * 2 + (j - 1)] = v;
  }
  EXPECT_EQ(a, (std::vector<double>{2, -1, -1, 1}));
}

TEST(MinEigenvalue, AllFiveVertexGraphsMatchOracle) {
  for (std::uint64_t mask = 0; mask < 1024; ++mask) {
    const Graph g = reference::graph_from_mask(5, mask);
    for (std::size_t s = 1; s <= 4; ++s) {
      const Habitat h(g, s);
      const double ref = min_eigenvalue_oracle(h);
      EXPECT_NEAR(min_eigenvalue(DirichletSystem(h)).value, ref, 1e-8) << mask << " s=" << s;
      EXPECT_NEAR(min_eigenvalue(DirichletSystem(h), force_lanczos()).value, ref, 1e-8) << mask << " s=" << s;
    }
  }
}

TEST(MinEigenvalue, RandomSmallHabitatsMatchOracle) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const Habitat h = reference::random_habitat(6, 12, rng);
    const double ref = min_eigenvalue_oracle(h);
    EXPECT_NEAR(min_eigenvalue(DirichletSystem(h)).value, ref, 1e-8);
    EXPECT_NEAR(min_eigenvalue(DirichletSystem(h), force_lanczos()).value, ref, 1e-8);
  }
}

TEST(MinEigenvalue, LanczosAgreesWithDenseOnLargerHabitats) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n = 150 + 10 * seed;
    const double p = (seed % 3 + 1) * std::log(double(n)) / double(n);
    const Habitat h(gen_gnp(n, p, seed), 5 + seed);
    const DirichletSystem sys(h);
    const EigenResult dense = min_eigenvalue(sys);
    const EigenResult lanczos = min_eigenvalue(sys, force_lanczos());
    EXPECT_EQ(dense.solver, SolverKind::dense);
    // A sink-free component short-circuits to an exact zero without iterating.
    if (dense.value > 0.0) EXPECT_EQ(lanczos.solver, SolverKind::lanczos);
    EXPECT_NEAR(dense.value, lanczos.value, 1e-8) << seed;
  }
}

TEST(MinEigenvalue, ReturnsNormalizedEigenvectorWithSmallResidual) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const Habitat h = reference::random_habitat(3, 60, rng);
    const DirichletSystem sys(h);
    for (const SolverOptions& opts : {SolverOptions{}, force_lanczos()}) {
      const EigenResult r = min_eigenvalue(sys, opts);
      ASSERT_EQ(r.vector.size(), sys.dim());
      double norm = 0.0;
      for (double v : r.vector) norm += v * v;
      EXPECT_NEAR(norm, 1.0, 1e-10);
      EXPECT_LE(r.residual, absolute_tolerance(sys, opts.tol));
      EXPECT_NEAR(residual_norm(sys, r.value, r.vector), r.residual, 1e-12);
      EXPECT_GE(r.value, 0.0);
    }
  }
}

TEST(MinEigenvalue, SinkFreeComponentGivesExactZero) {
  // Vertices 3 and 4 form an interior component with no sink neighbors.
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {3, 4}};
  const Habitat h(Graph::from_edges(5, edges), 1);
  const EigenResult r = min_eigenvalue(DirichletSystem(h));
  EXPECT_EQ(r.value, 0.0);
  EXPECT_DOUBLE_EQ(r.vector[2], r.vector[3]);
  EXPECT_EQ(r.vector[0], 0.0);
}

TEST(MinEigenvalue, HittingIterationCapReportsBestEstimate) {
  const Habitat h(gen_gnp(400, 0.02, 3), 4);
  SolverOptions opts = force_lanczos();
  opts.max_iterations = 3;
  opts.krylov_dim = 3;
  try {
    (void)min_eigenvalue(DirichletSystem(h), opts);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_TRUE(std::isfinite(e.best().value));
    EXPECT_GT(e.best().residual, 0.0);
  }
}

TEST(Bounds, SandwichHoldsOnFuzzCorpus) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 2000; ++trial) {
    const Habitat h = reference::random_habitat(2, 60, rng);
    const DirichletSystem sys(h);
    const double xi = min_eigenvalue(sys).value;
    const SpectralBounds b = bounds(sys);
    EXPECT_LE(b.zeta, xi + 1e-8);
    EXPECT_LE(xi, b.theta + 1e-8);
  }
}

TEST(Bounds, IsolatedMinimizerAttainsLowerBound) {
  // Interior vertex v touches only sinks, and every other interior vertex
  // has at least as many sink neighbors: xi = zeta = z_v.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t s = 3, d = 8;
    std::vector<Edge> edges;
    const Vertex v = static_cast<Vertex>(s);
    edges.push_back({0, v});
    for (Vertex j = v + 1; j < s + d; ++j) {
      edges.push_back({0, j});
      if (trial % 2) edges.push_back({1, j});
    }
    std::bernoulli_distribution coin(0.5);
    for (Vertex i = v + 1; i < s + d; ++i)
      for (Vertex j = i + 1; j < s + d; ++j)
        if (coin(rng)) edges.push_back({i, j});
    const DirichletSystem sys(Habitat(Graph::from_edges(s + d, edges), s));
    EXPECT_EQ(sys.zeta(), 1u);
    EXPECT_NEAR(min_eigenvalue(sys).value, 1.0, 1e-8);
  }
}

TEST(Bounds, ConstantSinkDegreeAttainsBothBounds) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t s = 1 + trial % 4;
    const DirichletSystem sys(constant_z_habitat(s, 10 + trial, 0.3, rng));
    const double xi = min_eigenvalue(sys).value;
    EXPECT_NEAR(xi, static_cast<double>(sys.zeta()), 1e-8);
    EXPECT_NEAR(xi, sys.theta(), 1e-8);
  }
}

TEST(Bounds, AddingAnEdgeNeverLowersXi) {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Habitat h = reference::random_habitat(3, 30, rng);
    const Graph& g = h.graph();
    const auto n = static_cast<Vertex>(g.num_vertices());
    const Vertex u = std::uniform_int_distribution<Vertex>(0, n - 1)(rng);
    const Vertex v = std::uniform_int_distribution<Vertex>(0, n - 1)(rng);
    if (u == v || g.has_edge(u, v)) continue;
    const double before = min_eigenvalue(DirichletSystem(h)).value;
    const double after = min_eigenvalue(DirichletSystem(Habitat(g.with_edge({u, v}), h.sinks()))).value;
    EXPECT_GE(after, before - 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Weyl, SpectralRadiusBracketsOracle) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 20;
    const Graph g = reference::bernoulli_graph(n, 0.4, rng);
    std::vector<double> a(n * n, 0.0);
    for (const Edge& e : g.edges()) a[e.u * n + e.v] = a[e.v * n + e.u] = 1.0;
    const double ref = reference::jacobi_eigenvalues(a, n).back();
    const auto [lo, hi] = adjacency_spectral_radius(g);
    EXPECT_LE(lo, ref + 1e-9);
    EXPECT_GE(hi, ref - 1e-9);
    EXPECT_LE(hi - lo, 1e-6 * std::max(1.0, ref));
  }
}

TEST(Weyl, LowerBoundNeverExceedsXi) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const Habitat h = reference::random_habitat(2, 80, rng);
    const DirichletSystem sys(h);
    EXPECT_LE(weyl_lower_bound(sys), min_eigenvalue(sys).value + 1e-8);
  }
}

TEST(Weyl, TightOnConstantSinkDegreeWithEmptyInterior) {
  // Interior edgeless and all z_i = s: L^(S) = s I, and the bound is exact.
  std::mt19937_64 rng(1);
  const DirichletSystem sys(constant_z_habitat(3, 12, 0.0, rng));
  EXPECT_NEAR(weyl_lower_bound(sys), 3.0, 1e-9);
}

TEST(PositiveDefinite, ConnectedHabitatsArePositive) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = gen_gnp(60, 0.15, seed);
    if (!is_connected(g)) continue;
    EXPECT_TRUE(is_positive_definite(Habitat(g, 1 + seed % 5)));
  }
}

TEST(PositiveDefinite, IsolatedInteriorVertexIsNot) {
  std::vector<Edge> edges{{0, 1}, {1, 2}};
  const Habitat h(Graph::from_edges(4, edges), 1);  // vertex 3 is isolated
  EXPECT_FALSE(is_positive_definite(h));
  EXPECT_THROW(is_positive_definite(Habitat(Graph::path(3), 0)), std::invalid_argument);
}
