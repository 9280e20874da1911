#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "patchsize/defaults.hpp"
#include "patchsize/graph.hpp"

namespace patchsize {

/// The Dirichlet matrix of a habitat: the principal submatrix of the graph
/// Laplacian on the non-sink vertices, kept in the split form Z + L~ where
/// Z = diag(z) counts sink neighbors and L~ is the Laplacian of the
/// subgraph induced by the non-sinks.
///
/// Never stored densely; `apply` computes y = Z x + L~ x.
class DirichletSystem {
 public:
  explicit DirichletSystem(const Habitat& h);

  std::size_t dim() const { return z_.size(); }
  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t sinks() const { return sinks_; }

  std::span<const std::size_t> z() const { return z_; }
  const Graph& interior() const { return interior_; }

  /// Number of edges with exactly one end in the sink set.
  std::uint64_t boundary_edges() const { return boundary_edges_; }
  /// min_i z_i
  std::size_t zeta() const { return zeta_; }
  /// boundary_edges / (n - s)
  double theta() const { return static_cast<double>(boundary_edges_) / static_cast<double>(dim()); }

  /// Diagonal entry z_i + d~(i), which is also the full-graph degree d(i).
  double diagonal(std::size_t i) const { return diagonal_[i]; }
  std::span<const double> diagonal() const { return diagonal_; }

  /// max_i (z_i + 2 d~(i)): Gershgorin upper bound on the spectrum.
  double gershgorin_bound() const { return gershgorin_; }
  /// Largest full-graph degree among non-sink vertices.
  std::size_t max_degree() const { return max_degree_; }
  /// Smallest full-graph degree among non-sink vertices.
  std::size_t min_degree() const { return min_degree_; }

  void apply(std::span<const double> x, std::span<double> y) const;

  /// Row-major dim x dim copy of the matrix.
  std::vector<double> dense() const;

  /// Coordinate text: "dim nnz" then one "i j value" line per nonzero, 1-based.
  void write_coordinate(std::ostream& out) const;

 private:
  std::size_t num_vertices_;
  std::size_t sinks_;
  Graph interior_;
  std::vector<std::size_t> z_;
  std::vector<double> diagonal_;
  std::uint64_t boundary_edges_ = 0;
  std::size_t zeta_ = 0;
  double gershgorin_ = 0.0;
  std::size_t max_degree_ = 0;
  std::size_t min_degree_ = 0;
};

enum class SolverKind { dense, lanczos, oracle };
std::string_view to_string(SolverKind kind);

struct EigenResult {
  double value = 0.0;
  /// ||L v - value v|| / ||v|| for the returned vector.
  double residual = 0.0;
  SolverKind solver = SolverKind::dense;
  std::size_t iterations = 0;
  std::vector<double> vector;
};

struct SolverOptions {
  /// Target accuracy relative to max(1, Gershgorin bound).
  double tol = defaults::kEigenTolerance;
  std::size_t dense_threshold = defaults::kDenseThreshold;
  std::size_t krylov_dim = defaults::kKrylovDim;
  std::size_t max_iterations = defaults::kMaxLanczosSteps;
};

/// Thrown when an iterative method exhausts its budget. Carries the best
/// estimate reached.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, EigenResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const EigenResult& best() const { return best_; }

 private:
  EigenResult best_;
};

/// Absolute residual target for a system: tol * max(1, Gershgorin bound).
double absolute_tolerance(const DirichletSystem& sys, double tol);

/// ||L v - lambda v|| / ||v||.
double residual_norm(const DirichletSystem& sys, double lambda, std::span<const double> v);

/// Smallest eigenvalue of the Dirichlet matrix.
///
/// The matrix is block diagonal over the connected components of the
/// interior subgraph. A component with no sink neighbors contributes the
/// exact eigenvalue 0; every other component is solved on its own, densely
/// (Householder tridiagonalization, Sturm bisection, inverse iteration) up
/// to `dense_threshold` vertices and by Lanczos with full
/// reorthogonalization on the shifted operator c I - L beyond that.
EigenResult min_eigenvalue(const DirichletSystem& sys, const SolverOptions& options = {});

struct SpectralBounds {
  double zeta;
  double theta;
};

/// Deterministic bounds zeta <= xi <= theta.
SpectralBounds bounds(const DirichletSystem& sys);

struct PowerOptions {
  double tol = defaults::kPowerTolerance;
  std::size_t max_iterations = defaults::kMaxPowerSteps;
};

/// Weyl-type diagnostic min_i d(i) - lambda_max(A), A the adjacency of the
/// interior subgraph.
///
/// lambda_max is over-estimated by the Collatz-Wielandt ratio of the power
/// iterate, so the returned value never exceeds the true Weyl bound. It may
/// be negative.
double weyl_lower_bound(const DirichletSystem& sys, const PowerOptions& options = {});

/// Spectral radius of the interior adjacency: returns {lower, upper} enclosing it.
std::pair<double, double> adjacency_spectral_radius(const Graph& g, const PowerOptions& options = {});

/// xi > tol. Requires at least one sink.
bool is_positive_definite(const Habitat& h, double tol = defaults::kPositivityThreshold,
                          const SolverOptions& options = {});

}  // namespace patchsize
